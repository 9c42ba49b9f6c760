use measure_core::{tolerance, Error, Observable, Result};
use num_complex::Complex64;

use crate::linalg::{c, eigh, from_spectrum, hermitize, hermiticity_residual, max_abs, CMatrix};

/// A Hermitian positive semidefinite operator with positive trace, the
/// quantum analogue of a population.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: CMatrix,
    trace: f64,
}

impl DensityOperator {
    /// Validates Hermiticity (residual ≤ `herm`, relative to the largest entry
    /// when above 1) and positivity (smallest eigenvalue ≥ `−psd`, relative),
    /// clipping slightly negative eigenvalues to 0.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let tol = tolerance::current();
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::Shape(format!("density operator must be square and non-empty, got {}×{}", matrix.nrows(), matrix.ncols())));
        }
        let scale = max_abs(&matrix).max(1.0);
        let herm = hermiticity_residual(&matrix);
        if herm > tol.herm * scale {
            return Err(Error::Invalid(format!("density operator is not Hermitian (residual {herm:.3e})")));
        }
        let (values, vectors) = eigh(&matrix);
        let min = values.first().copied().unwrap_or(0.0);
        if min < -tol.psd * scale {
            return Err(Error::Negative(format!("density operator has eigenvalue {min:.3e}")));
        }
        let matrix = if min < 0.0 { from_spectrum(&values, &vectors, |v| v.max(0.0)) } else { hermitize(&matrix) };
        let trace = matrix.trace().re;
        if tol.snap(trace) <= 0.0 {
            return Err(Error::Degenerate("density operator has zero trace".into()));
        }
        Ok(Self { matrix, trace })
    }

    /// Diagonal density operator with the given weights.
    pub fn from_diagonal(weights: &[f64]) -> Result<Self> {
        Self::new(diagonal(weights))
    }

    /// The matrix.
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Trace `N`.
    pub fn trace(&self) -> f64 {
        self.trace
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// A Hermitian operator.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumObservable {
    matrix: CMatrix,
}

impl QuantumObservable {
    /// Validates Hermiticity within `herm` (relative to the largest entry when above 1).
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let tol = tolerance::current();
        if !matrix.is_square() {
            return Err(Error::Shape(format!("observable must be square, got {}×{}", matrix.nrows(), matrix.ncols())));
        }
        let herm = hermiticity_residual(&matrix);
        if herm > tol.herm * max_abs(&matrix).max(1.0) {
            return Err(Error::Invalid(format!("observable is not Hermitian (residual {herm:.3e})")));
        }
        Ok(Self { matrix: hermitize(&matrix) })
    }

    /// Diagonal observable.
    pub fn from_diagonal(values: &[f64]) -> Self {
        Self { matrix: diagonal(values) }
    }

    /// Diagonal embedding of a classical observable.
    pub fn embed(x: &Observable) -> Self {
        Self::from_diagonal(x.values())
    }

    /// Identity on a `d`-dimensional space.
    pub fn identity(d: usize) -> Self {
        Self { matrix: CMatrix::identity(d, d) }
    }

    /// Spectral functional calculus `f(X)`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { matrix: crate::linalg::apply_fn(&self.matrix, f) }
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        eigh(&self.matrix).0
    }

    /// The matrix.
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Dimension.
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub(crate) fn from_hermitian_unchecked(matrix: CMatrix) -> Self {
        Self { matrix: hermitize(&matrix) }
    }
}

pub(crate) fn diagonal(values: &[f64]) -> CMatrix {
    let d = values.len();
    CMatrix::from_fn(d, d, |i, j| if i == j { c(values[i]) } else { c(0.0) })
}

fn check_dim(rho: &DensityOperator, d: usize) -> Result<()> {
    if rho.dim() != d {
        return Err(Error::Shape(format!("operator of dimension {d} on a {}-dimensional state", rho.dim())));
    }
    Ok(())
}

/// `Tr(A μ)/N` as a complex number, for any square `A`.
pub fn q_mean(rho: &DensityOperator, a: &CMatrix) -> Result<Complex64> {
    check_dim(rho, a.nrows())?;
    Ok((a * rho.matrix()).trace() / rho.trace())
}

/// `𝔼_μ[X] = Tr(Xμ)/N` (real for Hermitian `X`).
pub fn q_expectation(rho: &DensityOperator, x: &QuantumObservable) -> Result<f64> {
    Ok(q_mean(rho, x.matrix())?.re)
}

/// `cov_μ(X₀, X₁) = 𝔼_μ[X₀X₁] − 𝔼_μ[X₀]𝔼_μ[X₁]`; complex when the
/// operands do not commute, with `cov(X, U) − cov(U, X) = 𝔼_μ[[X, U]]`.
pub fn q_covariance(rho: &DensityOperator, x0: &QuantumObservable, x1: &QuantumObservable) -> Result<Complex64> {
    let prod = x0.matrix() * x1.matrix();
    Ok(q_mean(rho, &prod)? - q_mean(rho, x0.matrix())? * q_mean(rho, x1.matrix())?)
}
