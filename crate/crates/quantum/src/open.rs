use measure_core::{tolerance, Error, Result};
use num_complex::Complex64;
use serde::Serialize;

use crate::linalg::{c, eigh, max_abs, support_pinv, support_projection, CMatrix};
use crate::operators::{q_covariance, q_expectation, DensityOperator, QuantumObservable};
use crate::price::q_price;
use crate::process::QuantumProcess;

/// A closed quantum process into the parented child state `μ′_π = π μ′`
/// together with the full child state `μ′` and the parented density `π`.
#[derive(Debug, Clone, PartialEq)]
pub struct OpenQuantumProcess {
    closed: QuantumProcess,
    full_target: DensityOperator,
    parented: QuantumObservable,
    orphaned: QuantumObservable,
}

impl OpenQuantumProcess {
    /// Validates `0 ≤ π ≤ Id′`, `[π, μ′] = 0` and `closed.target = π μ′`
    /// (all within `rel`), and sets `ν = Id′ − π`.
    pub fn new(closed: QuantumProcess, full_target: DensityOperator, parented: QuantumObservable) -> Result<Self> {
        let tol = tolerance::current();
        let d2 = closed.target().dim();
        if full_target.dim() != d2 || parented.dim() != d2 {
            return Err(Error::Shape("parented density, full child state and closed process differ in dimension".into()));
        }
        let values = eigh(parented.matrix()).0;
        if values.first().copied().unwrap_or(0.0) < -tol.psd || values.last().copied().unwrap_or(0.0) > 1.0 + tol.psd {
            return Err(Error::Validation("parented density must satisfy 0 ≤ π ≤ Id′".into()));
        }
        let mu = full_target.matrix();
        let pi = parented.matrix();
        let scale = max_abs(mu).max(1.0);
        let comm = max_abs(&(pi * mu - mu * pi));
        if comm > tol.rel * scale {
            return Err(Error::Validation(format!("parented density does not commute with the child state ({comm:.3e})")));
        }
        let diff = max_abs(&(pi * mu - closed.target().matrix()));
        if diff > tol.rel * scale {
            return Err(Error::Validation(format!("parented state differs from π μ′ by {diff:.3e}")));
        }
        let orphaned = QuantumObservable::new(CMatrix::identity(d2, d2) - pi)?;
        Ok(Self { closed, full_target, parented, orphaned })
    }

    /// Builds the open process with `μ′ = μ′_π + orphans` for a positive
    /// semidefinite orphan state commuting with `μ′_π`; the parented density
    /// is `π = μ′_π (μ′)⁺ + (Id′ − P_{μ′})`.
    pub fn with_orphans(closed: QuantumProcess, orphans: CMatrix) -> Result<Self> {
        let tol = tolerance::current();
        let parented_state = closed.target().matrix().clone();
        let d2 = parented_state.nrows();
        if orphans.nrows() != d2 || orphans.ncols() != d2 {
            return Err(Error::Shape(format!("orphan state is {}×{}, expected {d2}×{d2}", orphans.nrows(), orphans.ncols())));
        }
        let scale = max_abs(&parented_state).max(max_abs(&orphans)).max(1.0);
        if max_abs(&(&orphans * &parented_state - &parented_state * &orphans)) > tol.rel * scale {
            return Err(Error::Validation("orphan state must commute with the parented child state".into()));
        }
        if eigh(&orphans).0.first().copied().unwrap_or(0.0) < -tol.psd * scale {
            return Err(Error::Negative("orphan state is not positive semidefinite".into()));
        }
        let full = DensityOperator::new(&parented_state + orphans)?;
        let pinv = support_pinv(full.matrix(), tol.supp);
        let null = CMatrix::identity(d2, d2) - support_projection(full.matrix(), tol.supp);
        let pi = &parented_state * pinv;
        let pi = (&pi + pi.adjoint()) * c(0.5) + null;
        Self::new(closed, full, QuantumObservable::new(pi)?)
    }

    /// Closed process `𝒲_π : μ → μ′_π`.
    pub fn closed(&self) -> &QuantumProcess {
        &self.closed
    }

    /// Full child state `μ′`.
    pub fn full_target(&self) -> &DensityOperator {
        &self.full_target
    }

    /// Parented density `π`.
    pub fn parented_density(&self) -> &QuantumObservable {
        &self.parented
    }

    /// Orphaned density `ν = Id′ − π`.
    pub fn orphan_density(&self) -> &QuantumObservable {
        &self.orphaned
    }

    /// `p′_π = Tr′(μ′_π)/Tr′(μ′)`.
    pub fn p_parented(&self) -> f64 {
        self.closed.target().trace() / self.full_target.trace()
    }
}

/// The quantum Kerr-Godfrey-Smith equation in its four forms (left/right
/// local averages × ν/π orphan terms).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantumKgs {
    /// `𝔼′_{μ′}[Y] − 𝔼_μ[X]` over the full child state.
    pub delta: f64,
    /// `cov_μ(X, U)` of the closed process.
    pub left_selection: Complex64,
    /// `𝔼_μ[(⟨Y⟩^left − X) U]`.
    pub left_transmission: Complex64,
    /// `cov_μ(U, X)`.
    pub right_selection: Complex64,
    /// `𝔼_μ[U (⟨Y⟩^right − X)]`.
    pub right_transmission: Complex64,
    /// `cov′_{μ′}(Y, ν)/p′_π`.
    pub orphan_nu: Complex64,
    /// `−cov′_{μ′}(Y, π)/p′_π`.
    pub orphan_pi: Complex64,
    /// `p′_π`.
    pub p_parented: f64,
    /// `|delta − (sum of the three terms)|` for left-ν, left-π, right-ν, right-π.
    pub residuals: [f64; 4],
}

impl QuantumKgs {
    /// Every residual is within `rel` relative to the largest term.
    pub fn holds(&self, rel: f64) -> bool {
        let scale = [
            1.0,
            self.delta.abs(),
            self.left_selection.norm(),
            self.left_transmission.norm(),
            self.right_selection.norm(),
            self.right_transmission.norm(),
            self.orphan_nu.norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        self.residuals.iter().all(|r| *r <= rel * scale)
    }
}

/// Left and right quantum Kerr-Godfrey-Smith equations for `X` on the parent
/// space and `Y` on the child space.
pub fn q_kgs(p: &OpenQuantumProcess, x: &QuantumObservable, y: &QuantumObservable) -> Result<QuantumKgs> {
    let pp = p.p_parented();
    if tolerance::current().snap(pp) <= 0.0 {
        return Err(Error::Degenerate("every child is an orphan".into()));
    }
    let closed = q_price(&p.closed, x, y)?;
    let delta = q_expectation(&p.full_target, y)? - q_expectation(p.closed.source(), x)?;
    let orphan_nu = q_covariance(&p.full_target, y, &p.orphaned)? / pp;
    let orphan_pi = -q_covariance(&p.full_target, y, &p.parented)? / pp;
    let d = c(delta);
    let left = closed.left_ns + closed.left_ec;
    let right = closed.right_ns + closed.right_ec;
    Ok(QuantumKgs {
        delta,
        left_selection: closed.left_ns,
        left_transmission: closed.left_ec,
        right_selection: closed.right_ns,
        right_transmission: closed.right_ec,
        orphan_nu,
        orphan_pi,
        p_parented: pp,
        residuals: [
            (d - left - orphan_nu).norm(),
            (d - left - orphan_pi).norm(),
            (d - right - orphan_nu).norm(),
            (d - right - orphan_pi).norm(),
        ],
    })
}
