use measure_core::{covariance, expectation, Observable, Result};
use process_core::{compose, Process};
use serde::{Deserialize, Serialize};

/// The three components of the multi-level Price equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultilevelPrice {
    /// `cov(𝔼′_w[y], 𝔼′_w[U′])`.
    pub between: f64,
    /// `𝔼[cov_w(y, U′)]`.
    pub within: f64,
    /// `𝔼[𝔼′_w[Δ_{w′}(y, z)·U′]]`.
    pub transmission: f64,
    /// `Δ(ȳ, z̄) = 𝔼″[z] − 𝔼′[y]`.
    pub delta: f64,
    /// `delta − between − within − transmission`.
    pub residual: f64,
}

/// Multi-level variance identity `var′(U′) = var(U^{(2)}) + 𝔼[var′_w(U′)]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultilevelVariance {
    /// `var′(U′)` on the intermediate population.
    pub var_u_next: f64,
    /// `var(U^{(2)})` with `U^{(2)} = ⟨U′⟩_w·U`.
    pub var_u2: f64,
    /// `𝔼[𝔼′_w[U′²] − 𝔼′_w[U′]²]`.
    pub mean_conditional_var: f64,
    /// `var_u_next − var_u2 − mean_conditional_var`.
    pub residual: f64,
}

/// `𝔼′_w[y](i) = ⟨y⟩_w(i)·U(i)`.
fn cond_expect(p: &Process, y: &[f64]) -> Vec<f64> {
    p.local_average_values(y).iter().zip(p.u()).map(|(a, u)| a * u).collect()
}

fn on_source(p: &Process, v: Vec<f64>) -> Result<Observable> {
    Observable::on(p.source(), v)
}

/// Multi-level Price equation for `p` followed by `q`, with `y` on the
/// intermediate population and `z` on the final one.
pub fn multilevel_price(p: &Process, q: &Process, y: &Observable, z: &Observable) -> Result<MultilevelPrice> {
    compose(p, q)?;
    y.check_on(p.target())?;
    z.check_on(q.target())?;
    let u_next = q.u();
    let ey = cond_expect(p, y.values());
    let eu = cond_expect(p, u_next);
    let yu: Vec<f64> = y.values().iter().zip(u_next).map(|(a, b)| a * b).collect();
    let eyu = cond_expect(p, &yu);
    let between = covariance(p.source(), &on_source(p, ey.clone())?, &on_source(p, eu.clone())?)?;
    let cond_cov: Vec<f64> = (0..ey.len()).map(|i| eyu[i] - ey[i] * eu[i]).collect();
    let within = expectation(p.source(), &on_source(p, cond_cov)?)?;
    let dz = q.local_change(&Observable::on(q.source(), y.values().to_vec())?, z)?;
    let dzu: Vec<f64> = dz.values().iter().zip(u_next).map(|(a, b)| a * b).collect();
    let transmission = expectation(p.source(), &on_source(p, cond_expect(p, &dzu))?)?;
    let delta = expectation(q.target(), z)? - expectation(p.target(), y)?;
    Ok(MultilevelPrice { between, within, transmission, delta, residual: delta - between - within - transmission })
}

/// Multi-level variance decomposition of `var′(U′)` for `p` followed by `q`.
pub fn multilevel_variance(p: &Process, q: &Process) -> Result<MultilevelVariance> {
    compose(p, q)?;
    let u_next = q.u();
    let var_u_next = measure_core::variance(q.source(), &q.fitness().u)?;
    let u2 = cond_expect(p, u_next);
    let var_u2 = measure_core::variance(p.source(), &on_source(p, u2.clone())?)?;
    let sq: Vec<f64> = u_next.iter().map(|u| u * u).collect();
    let esq = cond_expect(p, &sq);
    let cond_var: Vec<f64> = (0..u2.len()).map(|i| esq[i] - u2[i] * u2[i]).collect();
    let mean_conditional_var = expectation(p.source(), &on_source(p, cond_var)?)?;
    Ok(MultilevelVariance {
        var_u_next,
        var_u2,
        mean_conditional_var,
        residual: var_u_next - var_u2 - mean_conditional_var,
    })
}
