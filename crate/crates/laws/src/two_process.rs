use measure_core::{tolerance, xlogx, Error, Result};
use price::multilevel_variance;
use process_core::{compose, Process};

use crate::distribution::Distribution;
use crate::report::{EquilibriumClass, LawReport};
use crate::single::second_law;
use crate::stationarity::stationarity;

/// `𝔼_μ/N[f(i)]` over the parents of `p`.
fn mean_over(p: &Process, f: impl Fn(usize) -> f64) -> f64 {
    let q = p.source().probabilities();
    measure_core::kahan_sum((0..q.len()).map(|i| if q[i] == 0.0 { 0.0 } else { q[i] * f(i) }))
}

/// Strong lower bound on the environmental change of variance:
/// `𝔼[(⟨U′²⟩_w − U²)U] ≥ 𝔼[U³(R̄−1)]·𝔼[U³(R̄+1)]/𝔼[U³]`,
/// with `R̄ = ⟨U′⟩_w/U`. Saturated for strongly stationary pairs.
pub fn ec_variance_bound(p: &Process, q: &Process) -> Result<LawReport> {
    compose(p, q)?;
    let u = p.u();
    let u_next = q.u();
    let m3 = mean_over(p, |i| u[i].powi(3));
    if m3 <= tolerance::current().zero {
        return Err(Error::Degenerate("E[U^3] vanishes".into()));
    }
    let sq: Vec<f64> = u_next.iter().map(|v| v * v).collect();
    let avg_sq = p.local_average_values(&sq);
    let avg = p.local_average_values(u_next);
    let lhs = mean_over(p, |i| (avg_sq[i] - u[i] * u[i]) * u[i]);
    // U³R̄ = U²⟨U′⟩
    let a = mean_over(p, |i| u[i] * u[i] * avg[i]);
    let bound = (a - m3) * (a + m3) / m3;
    let class = EquilibriumClass::of(&Distribution::of(p));
    let st = stationarity(p, q)?;
    Ok(LawReport::chain(
        "ec_variance_bound",
        vec![("E[(<U'^2> - U^2) U]", lhs), ("E[U^3(R-1)] E[U^3(R+1)] / E[U^3]", bound)],
        0,
        vec![false],
        class,
    )
    .with_scalar("E[U^3]", m3)
    .with_scalar("strongly_stationary", if st.strong { 1.0 } else { 0.0 }))
}

/// Environmental change of selective entropy against `log 𝔼U² + log 𝔼U³`.
///
/// `lhs = 𝔼[(⟨−U′ log U′⟩_w + U log U)·U]`. The bound `log 𝔼U² + log 𝔼U³`
/// is evaluated literally and can fail; the scalars carry the split
/// `lhs = 𝔼[U²⟨−R log R⟩_w] + 𝔼[U² log U·(1 − R̄)]` and the first part's
/// valid bound `𝔼[U²⟨−R log R⟩_w] ≤ log 𝔼U²`.
pub fn ec_selective_entropy_bound(p: &Process, q: &Process) -> Result<LawReport> {
    compose(p, q)?;
    let tol = tolerance::current();
    let u = p.u();
    let u_next = q.u();
    let m2 = mean_over(p, |i| u[i] * u[i]);
    let m3 = mean_over(p, |i| u[i].powi(3));
    if m2 <= tol.zero || m3 <= tol.zero {
        return Err(Error::Degenerate("vanishing moments of U".into()));
    }
    let neg_ent: Vec<f64> = u_next.iter().map(|v| -xlogx(*v)).collect();
    let avg_neg_ent = p.local_average_values(&neg_ent);
    let lhs = mean_over(p, |i| (avg_neg_ent[i] + xlogx(u[i])) * u[i]);
    let bound = m2.ln() + m3.ln();
    // 𝔼[U²⟨−R log R⟩] with R = U′/U on cells of childbearing parents
    let first = mean_over(p, |i| {
        if u[i] <= 0.0 || p.w()[i] <= 0.0 {
            return 0.0;
        }
        let row = &p.kernel()[i];
        let s: f64 = row
            .iter()
            .zip(u_next)
            .map(|(k, v)| k * -xlogx(v / u[i]))
            .sum::<f64>()
            / p.w()[i];
        u[i] * u[i] * s
    });
    let class = EquilibriumClass::of(&Distribution::of(p));
    Ok(LawReport::chain(
        "ec_selective_entropy_bound",
        vec![("log E[U^2] + log E[U^3]", bound), ("E[(<-U' log U'> + U log U) U]", lhs)],
        1,
        vec![false],
        class,
    )
    .with_scalar("first_part", first)
    .with_scalar("first_part_bound", m2.ln())
    .with_scalar("first_part_slack", m2.ln() - first)
    .with_scalar("second_part", lhs - first))
}

/// Multi-level second law: the second law of `q`, with the bound also
/// expressed through the multi-level variance identity
/// `var′(U′) = var(U^{(2)}) + 𝔼[var′_w(U′)]`.
pub fn multilevel_second_law(p: &Process, q: &Process) -> Result<LawReport> {
    let mv = multilevel_variance(p, q)?;
    let inner = second_law(q);
    let v = mv.var_u_next;
    let v2 = mv.var_u2 + mv.mean_conditional_var;
    let direct = -v * v.ln_1p();
    let via_identity = -v2 * v2.ln_1p();
    Ok(LawReport::chain(
        "multilevel_second_law",
        vec![("-var'(U') log(1 + var'(U'))", direct), ("cov'(-U' log U', U')", inner.lhs)],
        1,
        vec![false],
        inner.equilibrium_class,
    )
    .with_scalar("bound_via_multilevel_variance", via_identity)
    .with_scalar("route_residual", direct - via_identity)
    .with_scalar("var_u2", mv.var_u2)
    .with_scalar("mean_conditional_var", mv.mean_conditional_var))
}
