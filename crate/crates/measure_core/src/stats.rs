use crate::error::{Error, Result};
use crate::num::kahan_sum;
use crate::tolerance;
use crate::types::{Observable, Population};

/// 𝔼[X] = (1/N) Σ_i X(i) μ_i.
pub fn expectation(pop: &Population, x: &Observable) -> Result<f64> {
    x.check_on(pop)?;
    Ok(expectation_weighted(pop.weights(), x.values()) / pop.size())
}

/// Σ_i weights_i · values_i (compensated), without normalisation.
pub fn expectation_weighted(weights: &[f64], values: &[f64]) -> f64 {
    kahan_sum(weights.iter().zip(values).map(|(w, v)| w * v))
}

/// Population covariance cov(X, Y) = 𝔼[(X − X̄)(Y − Ȳ)] under μ/N.
pub fn covariance(pop: &Population, x: &Observable, y: &Observable) -> Result<f64> {
    x.check_on(pop)?;
    y.check_on(pop)?;
    let n = pop.size();
    let mx = expectation_weighted(pop.weights(), x.values()) / n;
    let my = expectation_weighted(pop.weights(), y.values()) / n;
    let s = kahan_sum(
        pop.weights()
            .iter()
            .zip(x.values().iter().zip(y.values()))
            .map(|(w, (a, b))| w * (a - mx) * (b - my)),
    );
    Ok(s / n)
}

/// var(X) = cov(X, X) ≥ 0.
pub fn variance(pop: &Population, x: &Observable) -> Result<f64> {
    Ok(covariance(pop, x, x)?.max(0.0))
}

/// The childbearing split of a population with respect to a fitness observable.
#[derive(Debug, Clone, PartialEq)]
pub struct ChildbearingStats {
    /// p_* = μ(U > 0)/N.
    pub p_star: f64,
    /// μ_* restricted to the childbearing types (types with U > 0 after snapping).
    pub restricted: Population,
    /// Positions (in the original type set) of the childbearing types.
    pub support: Vec<usize>,
}

/// p_* and the childbearing population μ_*(A) = μ(A ∩ {U > 0}).
///
/// Values with |u| ≤ ε_zero count as 0. Errors on negative entries or when no
/// type with positive weight is childbearing.
pub fn childbearing_stats(pop: &Population, u: &Observable) -> Result<ChildbearingStats> {
    u.check_on(pop)?;
    let tol = tolerance::current();
    if let Some(v) = u.values().iter().find(|v| **v < -tol.zero) {
        return Err(Error::Negative(format!("fitness value {v}")));
    }
    let support: Vec<usize> =
        (0..pop.len()).filter(|&i| tol.snap(u.values()[i]) > 0.0 && pop.weights()[i] > 0.0).collect();
    if support.is_empty() {
        return Err(Error::Degenerate("no childbearing mass".into()));
    }
    let types = pop.types().restrict(&support)?;
    let weights: Vec<f64> = support.iter().map(|&i| pop.weights()[i]).collect();
    let restricted = Population::new(types, weights)?;
    Ok(ChildbearingStats { p_star: restricted.size() / pop.size(), restricted, support })
}
