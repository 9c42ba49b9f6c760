//! Random density matrices, Hermitian observables and Kraus families.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn gaussian_like(rng: &mut ChaCha8Rng) -> f64 {
    // Sum of uniforms: cheap, symmetric and good enough for test matrices.
    (0..4).map(|_| rng.random_range(-1.0..1.0)).sum::<f64>() * 0.5
}

/// Random complex `rows × cols` matrix.
pub fn random_complex(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| Complex64::new(gaussian_like(rng), gaussian_like(rng)))
}

/// Random full-rank density matrix `G G†` scaled to trace `trace`.
pub fn random_density(rng: &mut ChaCha8Rng, d: usize, trace: f64) -> DMatrix<Complex64> {
    let g = random_complex(rng, d, d);
    let rho = &g * g.adjoint() + DMatrix::identity(d, d) * Complex64::new(0.05, 0.0);
    let t = rho.trace().re;
    rho * Complex64::new(trace / t, 0.0)
}

/// Random Hermitian matrix.
pub fn random_hermitian(rng: &mut ChaCha8Rng, d: usize) -> DMatrix<Complex64> {
    let g = random_complex(rng, d, d);
    (&g + g.adjoint()) * Complex64::new(0.5, 0.0)
}

/// `n` random Kraus operators `d2 × d` (not trace preserving in general).
pub fn random_kraus(rng: &mut ChaCha8Rng, d: usize, d2: usize, n: usize) -> Vec<DMatrix<Complex64>> {
    (0..n).map(|_| random_complex(rng, d2, d)).collect()
}

/// Diagonal complex matrix from real entries.
pub fn diag(values: &[f64]) -> DMatrix<Complex64> {
    let d = values.len();
    DMatrix::from_fn(d, d, |i, j| if i == j { Complex64::new(values[i], 0.0) } else { Complex64::new(0.0, 0.0) })
}
