use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

/// Complex matrix type used throughout the crate.
pub type CMatrix = DMatrix<Complex64>;

#[inline]
pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Largest entry modulus of `m − m†`.
pub fn hermiticity_residual(m: &CMatrix) -> f64 {
    (m - m.adjoint()).iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// `(m + m†)/2`.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * c(0.5)
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.
pub fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = SymmetricEigen::new(hermitize(m));
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), order.len(), |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

/// `V diag(f(λ)) V†`.
pub fn from_spectrum(values: &[f64], vectors: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let d = vectors.nrows();
    let mut out = CMatrix::zeros(d, d);
    for (k, &v) in values.iter().enumerate() {
        let fv = f(v);
        if fv != 0.0 {
            let col = vectors.column(k);
            out += (&col * col.adjoint()) * c(fv);
        }
    }
    out
}

/// Spectral functional calculus `f(m)` for Hermitian `m`.
pub fn apply_fn(m: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let (values, vectors) = eigh(m);
    from_spectrum(&values, &vectors, f)
}

/// Spectral norm of a Hermitian matrix (largest eigenvalue modulus).
pub fn spectral_norm(m: &CMatrix) -> f64 {
    eigh(m).0.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

/// Support cutoff `supp·max(‖m‖, tiny)` for a Hermitian matrix.
pub(crate) fn support_cutoff(values: &[f64], supp: f64) -> f64 {
    supp * values.iter().fold(f64::MIN_POSITIVE, |acc, v| acc.max(v.abs()))
}

/// Moore–Penrose pseudoinverse of a Hermitian matrix restricted to its
/// support, `f(λ) = 1/λ` for `|λ| > cutoff` and 0 otherwise.
pub fn support_pinv(m: &CMatrix, supp: f64) -> CMatrix {
    let (values, vectors) = eigh(m);
    let cut = support_cutoff(&values, supp);
    from_spectrum(&values, &vectors, |v| if v.abs() > cut { 1.0 / v } else { 0.0 })
}

/// Projection onto the support of a Hermitian matrix.
pub fn support_projection(m: &CMatrix, supp: f64) -> CMatrix {
    let (values, vectors) = eigh(m);
    let cut = support_cutoff(&values, supp);
    from_spectrum(&values, &vectors, |v| if v.abs() > cut { 1.0 } else { 0.0 })
}

/// `Tr(m)` real part.
#[inline]
pub(crate) fn re_trace(m: &CMatrix) -> f64 {
    m.trace().re
}

/// Column-major vectorisation.
pub(crate) fn vec_of(m: &CMatrix) -> nalgebra::DVector<Complex64> {
    nalgebra::DVector::from_column_slice(m.as_slice())
}

/// Inverse of [`vec_of`] for a `d × d` matrix.
pub(crate) fn unvec(v: &nalgebra::DVector<Complex64>, d: usize) -> CMatrix {
    CMatrix::from_column_slice(d, d, v.as_slice())
}
