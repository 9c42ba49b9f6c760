use entropy::{
    dispersion_mixing_from_profile, third_law_from_profile, CellEntropy, EntropyProfile, ThirdLaw,
};
use laws::{EquilibriumClass, LawReport};
use measure_core::{kahan_sum, tolerance, xlogx, xlogy, Error, Result};
use serde::Serialize;

use crate::laws::spectral_distribution;
use crate::linalg::{c, eigh, from_spectrum, hermitize, max_abs, re_trace, CMatrix};
use crate::process::QuantumProcess;

/// Quantum partition entropies with their bounds and third-law windows.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantumPartitionEntropy {
    /// Profile with one cell per pair of projections.
    pub profile: EntropyProfile,
    /// Dispersion-entropy chain.
    pub dispersion: LawReport,
    /// Mixing-entropy chain.
    pub mixing: LawReport,
    /// Selective changes and their windows.
    pub third_law: ThirdLaw,
    /// `Σ Ū_{π,π′}`; equals 1 when the projections commute with the fitness operator.
    pub cell_mass: f64,
}

fn check_resolution(projs: &[CMatrix], d: usize, name: &str) -> Result<()> {
    let tol = tolerance::current().herm;
    if projs.is_empty() {
        return Err(Error::Invalid(format!("{name}: empty partition")));
    }
    let mut total = CMatrix::zeros(d, d);
    for (k, p) in projs.iter().enumerate() {
        if p.nrows() != d || p.ncols() != d {
            return Err(Error::Shape(format!("{name}: projection {k} is {}×{}, expected {d}×{d}", p.nrows(), p.ncols())));
        }
        if max_abs(&(p - p.adjoint())) > tol || max_abs(&(p * p - p)) > tol {
            return Err(Error::Invalid(format!("{name}: operator {k} is not a Hermitian projection")));
        }
        total += p;
    }
    let res = max_abs(&(total - CMatrix::identity(d, d)));
    if res > tol {
        return Err(Error::Invalid(format!("{name}: projections do not resolve the identity (residual {res:.3e})")));
    }
    Ok(())
}

/// Partition entropies of a quantum process.
///
/// With `R = W^{+½}` (support pseudoinverse square root), each child
/// projection `π′` defines the environmental effect `E(π′) = R 𝒲†(π′) R` and
/// each cell the dispersion operator `D = π E(π′) π`. With the intermediate
/// state `μ̂ = U^{½} μ U^{½}/N` and the size-biased state
/// `ν̂ = U^{½} (Uμ + μU)/2 U^{½}/N`:
///
/// ```text
/// Ū = Tr(D μ̂),  S_dis = Tr(−D log D · μ̂),  S_mix = Tr(D log(D/Ū) · μ̂),  p̃ = Tr(P_D μ̂),
/// p̃φ = Tr(P_D ν̂),  p̃λ = Tr(D ν̂),  p̃γ = Tr(D² ν̂),  ∂_NS S_dis = Tr(−D log D · ν̂) − S_dis, …
/// ```
///
/// For diagonal embeddings of classical processes and rank-one diagonal
/// projections every quantity reduces to its classical counterpart.
pub fn q_partition_entropy(p: &QuantumProcess, projs_a: &[CMatrix], projs_b: &[CMatrix]) -> Result<QuantumPartitionEntropy> {
    let tol = tolerance::current();
    let d = p.source().dim();
    check_resolution(projs_a, d, "parent partition")?;
    check_resolution(projs_b, p.target().dim(), "child partition")?;

    let rho = p.source().matrix();
    let n = p.source().trace();
    let (wv, wvec) = eigh(p.w().matrix());
    let wcut = crate::linalg::support_cutoff(&wv, tol.supp);
    let r = from_spectrum(&wv, &wvec, |v| if v > wcut { 1.0 / v.sqrt() } else { 0.0 });
    let (uv, uvec) = eigh(p.u().matrix());
    let ucut = crate::linalg::support_cutoff(&uv, tol.supp);
    let u_half = from_spectrum(&uv, &uvec, |v| v.max(0.0).sqrt());
    let log_u = from_spectrum(&uv, &uvec, |v| if v > ucut { v.ln() } else { 0.0 });
    let u = p.u().matrix();
    let mu_hat = hermitize(&(&u_half * rho * &u_half)) * c(1.0 / n);
    let sym = (u * rho + rho * u) * c(0.5);
    let nu_hat = hermitize(&(&u_half * sym * &u_half)) * c(1.0 / n);
    let ns_sym = (&log_u * rho + rho * &log_u) * c(0.5);
    let s_hat = hermitize(&(&u_half * ns_sym * &u_half)) * c(-1.0 / n);

    let tr = |a: &CMatrix, b: &CMatrix| re_trace(&(a * b));
    let mut per_cell = Vec::with_capacity(projs_a.len() * projs_b.len());
    for (ia, pa) in projs_a.iter().enumerate() {
        for (ib, pb) in projs_b.iter().enumerate() {
            let e = &r * p.apply_adjoint(pb) * &r;
            let dm = hermitize(&(pa * e * pa));
            let (dv, dvec) = eigh(&dm);
            let dcut = tol.supp;
            let proj = from_spectrum(&dv, &dvec, |v| if v > dcut { 1.0 } else { 0.0 });
            let neg_dlogd = from_spectrum(&dv, &dvec, |v| if v > dcut { -xlogx(v) } else { 0.0 });
            let d2m = &dm * &dm;
            let u_bar = tr(&dm, &mu_hat);
            let p_tilde = tr(&proj, &mu_hat);
            let s_dis = tr(&neg_dlogd, &mu_hat);
            let mix_op = if u_bar > 0.0 {
                from_spectrum(&dv, &dvec, |v| if v > dcut { xlogy(v, v / u_bar) } else { 0.0 })
            } else {
                CMatrix::zeros(d, d)
            };
            let s_mix = tr(&mix_op, &mu_hat);
            let e_d2 = tr(&d2m, &mu_hat);
            let (pl, pphi, pgam) = (tr(&dm, &nu_hat), tr(&proj, &nu_hat), tr(&d2m, &nu_hat));
            let (phi, lambda, gamma) = if p_tilde > 0.0 { (pphi / p_tilde, pl / p_tilde, pgam / p_tilde) } else { (0.0, 0.0, 0.0) };
            let on: Vec<f64> = dv.iter().copied().filter(|v| *v > dcut).collect();
            let d_range = if on.is_empty() {
                (0.0, 0.0)
            } else {
                (on.iter().copied().fold(f64::INFINITY, f64::min), on.iter().copied().fold(0.0, f64::max))
            };
            per_cell.push(CellEntropy {
                a: ia,
                b: ib,
                u_bar,
                s_ec: -xlogx(u_bar),
                s_dis,
                s_mix,
                s_ns: tr(&dm, &s_hat),
                p_tilde,
                phi,
                lambda,
                gamma,
                e_d2,
                ns_s_dis: tr(&neg_dlogd, &nu_hat) - s_dis,
                ns_s_mix: tr(&mix_op, &nu_hat) - s_mix,
                ns_s_ec: if u_bar > 0.0 { -u_bar.ln() * (pl - u_bar) } else { 0.0 },
                d_range,
            });
        }
    }
    let total = |cells: &[CellEntropy], f: fn(&CellEntropy) -> f64| kahan_sum(cells.iter().map(f));
    let s_ec = total(&per_cell, |c| c.s_ec);
    let s_dis = total(&per_cell, |c| c.s_dis);
    let s_mix = total(&per_cell, |c| c.s_mix);
    let cell_mass = total(&per_cell, |c| c.u_bar);
    let dist = spectral_distribution(p);
    let s_ns = dist.selective_entropy();
    let profile = EntropyProfile {
        s_ns,
        s_ec,
        s_dis,
        s_mix,
        s_tot: s_ns + s_ec,
        per_cell,
    };
    let class = EquilibriumClass::of(&dist);
    let (dispersion, mixing) = dispersion_mixing_from_profile(&profile, class);
    let third_law = third_law_from_profile(&profile, class);
    Ok(QuantumPartitionEntropy { profile, dispersion, mixing, third_law, cell_mass })
}
