use laws::Distribution;
use measure_core::{kahan_sum, xlogy, Error, Result};
use process_core::Process;
use serde::{Deserialize, Serialize};

use crate::profile::generating_profile;

/// Environmental change of the environmental entropy across two generations,
/// computed by the closed-form cell sum and by the Price route.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntergenerationalChange {
    /// `−Σ (𝔼[U·U_{A,B}]/𝔼[U²])·Ū′_{B′,C}·log(Ū′_{B′,C}/Ū_{A,B})` over all
    /// cells of both generating partitions.
    pub formula: f64,
    /// `S′_EC − S_EC − ∂_NS S_EC`.
    pub price_route: f64,
    /// `formula − price_route`; not zero in general.
    pub residual: f64,
    /// `S_EC` of the first process.
    pub s_ec: f64,
    /// `S′_EC` of the second process.
    pub s_ec_next: f64,
    /// `∂_NS S_EC = Σ cov(−U_{A,B} log Ū_{A,B}, U)`.
    pub ns_s_ec: f64,
}

/// Environmental change `∂_EC(S_EC, S′_EC)` for `p` followed by `q`, both
/// at their singleton partitions. Both routes are reported with their residual.
pub fn intergenerational_ec_change(p: &Process, q: &Process) -> Result<IntergenerationalChange> {
    if p.target().types() != q.source().types() || !p.target().approx_eq(q.source(), 1e-9) {
        return Err(Error::NotComposable(
            "child population of the first process is not the parent population of the second"
                .into(),
        ));
    }
    let first = generating_profile(p);
    let second = generating_profile(q);
    let prob = p.source().probabilities();
    let u = p.u();
    let e_u2 = Distribution::of(p).moment(2.0);
    let wbar = p.wbar();

    let mut terms = Vec::new();
    for c in first.per_cell.iter().filter(|c| c.u_bar > 0.0) {
        // U_{i,j} is supported on the single parent i = c.a.
        let i = c.a;
        let u_ij = p.kernel()[i][c.b] / wbar;
        let weight = prob[i] * u[i] * u_ij / e_u2;
        for d in second.per_cell.iter().filter(|d| d.u_bar > 0.0) {
            terms.push(-weight * xlogy(d.u_bar, d.u_bar / c.u_bar));
        }
    }
    let formula = kahan_sum(terms);
    let ns_s_ec = kahan_sum(first.per_cell.iter().map(|c| c.ns_s_ec));
    let price_route = second.s_ec - first.s_ec - ns_s_ec;
    Ok(IntergenerationalChange {
        formula,
        price_route,
        residual: formula - price_route,
        s_ec: first.s_ec,
        s_ec_next: second.s_ec,
        ns_s_ec,
    })
}
