use laws::{first_law, second_law, selective_acceleration, selective_entropy_bounds, zeroth_law, Distribution, LawReport};
use measure_core::{kahan_sum, tolerance};
use serde::Serialize;

use crate::linalg::{eigh, support_cutoff};
use crate::process::QuantumProcess;

/// Spectral distribution of the relative fitness operator: eigenvalues `u_k`
/// of `U` with weights `⟨v_k|μ|v_k⟩/N`. Every `𝔼_μ[f(U)]` equals the
/// expectation of `f` under this distribution.
pub fn spectral_distribution(p: &QuantumProcess) -> Distribution {
    let (values, vectors) = eigh(p.u().matrix());
    let cut = support_cutoff(&values, tolerance::current().supp);
    let rho = p.source();
    let raw: Vec<f64> = (0..values.len())
        .map(|k| {
            let v = vectors.column(k);
            ((v.adjoint() * rho.matrix() * v)[(0, 0)].re / rho.trace()).max(0.0)
        })
        .collect();
    let total = kahan_sum(raw.iter().copied());
    let q = raw.iter().map(|x| x / total).collect();
    let u = values.iter().map(|&v| if v.abs() <= cut { 0.0 } else { v.max(0.0) }).collect();
    Distribution::new(u, q).expect("spectral weights of a state form a distribution").with_wbar(p.wbar())
}

/// The quantum selection laws, evaluated on the spectral distribution of `U`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantumLaws {
    /// `var_μ(U) ≥ 1/p_* − 1`.
    pub zeroth: LawReport,
    /// `−log(1 + var) ≤ S_NS ≤ log p_*`.
    pub gibbs: LawReport,
    /// `∂_NS var(U) ≥ var(1 + var)`.
    pub first: LawReport,
    /// Second-law chain for `∂_NS S_NS`.
    pub second: LawReport,
    /// Bounds on the selective acceleration `∂²_NS S_NS`.
    pub acceleration: LawReport,
}

/// Zeroth, Gibbs, First, Second and acceleration laws of quantum selection.
pub fn q_laws(p: &QuantumProcess) -> QuantumLaws {
    let d = spectral_distribution(p);
    QuantumLaws {
        zeroth: zeroth_law(&d),
        gibbs: selective_entropy_bounds(&d),
        first: first_law(&d),
        second: second_law(&d),
        acceleration: selective_acceleration(&d),
    }
}
