use measure_core::{tolerance, Error, Result};
use num_complex::Complex64;
use serde::Serialize;

use crate::linalg::{c, max_abs, support_pinv, support_projection, CMatrix};
use crate::operators::{q_covariance, q_expectation, q_mean, QuantumObservable};
use crate::process::QuantumProcess;

/// Left and right quantum Price decompositions of `𝔼′[Y] − 𝔼[X]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantumPriceDecomposition {
    /// `𝔼′_{μ′}[Y] − 𝔼_μ[X]`.
    pub delta: f64,
    /// `cov_μ(X, U)`.
    pub left_ns: Complex64,
    /// `𝔼_μ[(⟨Y⟩^left − X) U]` with `⟨Y⟩^left = (𝒲†Y) W⁺`.
    pub left_ec: Complex64,
    /// `cov_μ(U, X)`.
    pub right_ns: Complex64,
    /// `𝔼_μ[U (⟨Y⟩^right − X)]` with `⟨Y⟩^right = W⁺ (𝒲†Y)`.
    pub right_ec: Complex64,
    /// `𝔼_μ[[X, U]] = cov(X, U) − cov(U, X)`.
    pub commutator_gap: Complex64,
    /// `|delta − left_ns − left_ec|`.
    pub left_residual: f64,
    /// `|delta − right_ns − right_ec|`.
    pub right_residual: f64,
    /// `|Tr(𝒲†(Y)(Id − P_W) μ)|/N`: weight of `𝒲†Y` outside the support of `W`,
    /// which the local averages cannot see (zero for completely positive maps).
    pub support_leak: f64,
}

impl QuantumPriceDecomposition {
    /// Both residuals are within `rel` relative to the largest term.
    pub fn holds(&self, rel: f64) -> bool {
        let scale = [self.delta.abs(), self.left_ns.norm(), self.left_ec.norm(), self.right_ns.norm(), self.right_ec.norm(), 1.0]
            .into_iter()
            .fold(0.0, f64::max);
        self.left_residual <= rel * scale && self.right_residual <= rel * scale
    }
}

/// Left and right local averages `((𝒲†Y) W⁺, W⁺ (𝒲†Y))`.
pub fn local_averages(p: &QuantumProcess, y: &QuantumObservable) -> Result<(CMatrix, CMatrix)> {
    if y.dim() != p.target().dim() {
        return Err(Error::Shape("observable does not live on the child space".into()));
    }
    let pinv = support_pinv(p.w().matrix(), tolerance::current().supp);
    let pulled = p.apply_adjoint(y.matrix());
    Ok((&pulled * &pinv, &pinv * &pulled))
}

/// Left and right quantum Price equations for `X` on the parent space and `Y`
/// on the child space.
pub fn q_price(p: &QuantumProcess, x: &QuantumObservable, y: &QuantumObservable) -> Result<QuantumPriceDecomposition> {
    let rho = p.source();
    if x.dim() != rho.dim() {
        return Err(Error::Shape("observable does not live on the parent space".into()));
    }
    let u = p.u();
    let delta = q_expectation(p.target(), y)? - q_expectation(rho, x)?;
    let (left_avg, right_avg) = local_averages(p, y)?;
    let left_change = &left_avg - x.matrix();
    let right_change = &right_avg - x.matrix();
    let left_ns = q_covariance(rho, x, u)?;
    let right_ns = q_covariance(rho, u, x)?;
    let left_ec = q_mean(rho, &(&left_change * u.matrix()))?;
    let right_ec = q_mean(rho, &(u.matrix() * &right_change))?;
    let commutator = x.matrix() * u.matrix() - u.matrix() * x.matrix();
    let null = CMatrix::identity(rho.dim(), rho.dim()) - support_projection(p.w().matrix(), tolerance::current().supp);
    let leak = q_mean(rho, &(p.apply_adjoint(y.matrix()) * null))?.norm();
    Ok(QuantumPriceDecomposition {
        delta,
        left_ns,
        left_ec,
        right_ns,
        right_ec,
        commutator_gap: q_mean(rho, &commutator)?,
        left_residual: (c(delta) - left_ns - left_ec).norm(),
        right_residual: (c(delta) - right_ns - right_ec).norm(),
        support_leak: leak,
    })
}

/// Superoperator factorization `𝒲 = 𝒲_EC ∘ 𝒲_NS`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumFactorization {
    /// `𝒲_NS(μ) = W μ` (left multiplication by the fitness operator).
    pub selective: CMatrix,
    /// `𝒲_EC(μ̃) = 𝒲(W⁺ μ̃)`.
    pub environmental: CMatrix,
    /// Largest entry of `𝒲_EC 𝒲_NS − 𝒲 (P_W ·)`, the product restricted to the support of `W`.
    pub composition_residual: f64,
    /// Largest `|Tr′ 𝒲_EC(E) − Tr(P_W E)|` over matrix units `E`: trace preservation on the support.
    pub trace_residual: f64,
}

/// Price factorization of a quantum process into left multiplication by `W`
/// followed by a map that is trace preserving on the support of `W`.
pub fn q_factorize(p: &QuantumProcess) -> QuantumFactorization {
    let d = p.source().dim();
    let d2 = p.target().dim();
    let supp = tolerance::current().supp;
    let id = CMatrix::identity(d, d);
    let w = p.w().matrix();
    let selective = id.kronecker(w);
    let environmental = p.superoperator() * id.kronecker(&support_pinv(w, supp));
    let proj = support_projection(w, supp);
    let restricted = p.superoperator() * id.kronecker(&proj);
    let composition_residual = max_abs(&(&environmental * &selective - restricted));
    // Trace functional of a superoperator: row vector vec(Id′)ᵀ S.
    let trace_row: Vec<Complex64> =
        (0..d * d).map(|col| (0..d2).map(|k| environmental[(k + d2 * k, col)]).sum()).collect();
    let trace_residual = (0..d * d)
        .map(|col| {
            let (a, b) = (col % d, col / d);
            (trace_row[col] - proj[(b, a)]).norm()
        })
        .fold(0.0, f64::max);
    QuantumFactorization { selective, environmental, composition_residual, trace_residual }
}
