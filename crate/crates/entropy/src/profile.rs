use laws::{Distribution, EquilibriumClass, LawReport};
use measure_core::{kahan_sum, tolerance, xlogx, xlogy, Error, Result};
use process_core::Process;
use serde::{Deserialize, Serialize};

use crate::partition::Partition;

/// Entropy functionals of one cell `(A, B)` of a joint partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellEntropy {
    /// Block index in the parent partition.
    pub a: usize,
    /// Block index in the child partition.
    pub b: usize,
    /// `Ū_{A,B} = 𝔼[U_{A,B}]`.
    pub u_bar: f64,
    /// `−Ū log Ū`.
    pub s_ec: f64,
    /// `𝔼[−U_{A,B} log D_{A,B}]`.
    pub s_dis: f64,
    /// `𝔼[U_{A,B} log M_{A,B}]`.
    pub s_mix: f64,
    /// Local selective entropy `𝔼[−U_{A,B} log U]`.
    pub s_ns: f64,
    /// `p̃ = 𝔼[U·1_{U_{A,B}>0}]`, the intermediate mass of the cell's support.
    pub p_tilde: f64,
    /// `φ = Ẽ[U]`.
    pub phi: f64,
    /// `λ = Ẽ[U·D]`.
    pub lambda: f64,
    /// `γ = Ẽ[U·D²]`.
    pub gamma: f64,
    /// `𝔼[U·D²]` (unnormalised), entering the Jensen bounds.
    pub e_d2: f64,
    /// `cov(−U_{A,B} log D, U)`.
    pub ns_s_dis: f64,
    /// `cov(U_{A,B} log M, U)`.
    pub ns_s_mix: f64,
    /// `cov(−U_{A,B} log Ū, U)`.
    pub ns_s_ec: f64,
    /// Smallest and largest `D` on the cell support (equal at environmental equilibrium).
    pub d_range: (f64, f64),
}

/// Entropy profile of a process on a joint partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyProfile {
    /// Selective entropy `S_NS` (the sum of the local selective entropies).
    pub s_ns: f64,
    /// Environmental entropy `S_EC = Σ −Ū log Ū`.
    pub s_ec: f64,
    /// Dispersion entropy.
    pub s_dis: f64,
    /// Mixing entropy.
    pub s_mix: f64,
    /// Total entropy `S_NS + S_EC`.
    pub s_tot: f64,
    /// Per-cell contributions (cells with `Ū = 0` included, all zero).
    pub per_cell: Vec<CellEntropy>,
}

impl EntropyProfile {
    /// `S_EC − S_dis − S_mix`.
    pub fn decomposition_residual(&self) -> f64 {
        self.s_ec - self.s_dis - self.s_mix
    }
}

/// Selective entropy `S_NS = 𝔼[−U log U]`.
pub fn selective_entropy(p: &Process) -> f64 {
    Distribution::of(p).selective_entropy()
}

fn cov_with_u(q: &[f64], u: &[f64], x: &[f64]) -> f64 {
    let xm = kahan_sum(q.iter().zip(x).map(|(a, b)| a * b));
    let um = kahan_sum(q.iter().zip(u).map(|(a, b)| a * b));
    kahan_sum((0..q.len()).map(|i| q[i] * (x[i] - xm) * (u[i] - um)))
}

fn cell(
    p: &Process,
    q: &[f64],
    a_mask: &[bool],
    b_mask: &[bool],
    a: usize,
    b: usize,
) -> CellEntropy {
    let tol = tolerance::current();
    let u = p.u();
    let w = p.w();
    let wbar = p.wbar();
    let k = u.len();
    let w_b: Vec<f64> = p
        .kernel()
        .iter()
        .map(|row| kahan_sum(row.iter().zip(b_mask).filter(|(_, m)| **m).map(|(v, _)| *v)))
        .collect();
    let uab: Vec<f64> = (0..k)
        .map(|i| if a_mask[i] { w_b[i] / wbar } else { 0.0 })
        .collect();
    let supp: Vec<bool> = (0..k)
        .map(|i| q[i] > 0.0 && tol.snap(uab[i]) > 0.0 && w[i] > 0.0)
        .collect();
    let d: Vec<f64> = (0..k)
        .map(|i| if supp[i] { w_b[i] / w[i] } else { 0.0 })
        .collect();
    let sum = |f: &dyn Fn(usize) -> f64| kahan_sum((0..k).filter(|&i| supp[i]).map(f));

    let u_bar = sum(&|i| q[i] * uab[i]);
    let p_tilde = sum(&|i| q[i] * u[i]);
    let s_dis = sum(&|i| q[i] * -xlogy(uab[i], d[i]));
    let s_mix = if u_bar > 0.0 {
        sum(&|i| q[i] * xlogy(uab[i], d[i] / u_bar))
    } else {
        0.0
    };
    let s_ns = sum(&|i| q[i] * -xlogy(uab[i], u[i]));
    let (phi, lambda, gamma) = if p_tilde > 0.0 {
        (
            sum(&|i| q[i] * u[i] * u[i]) / p_tilde,
            sum(&|i| q[i] * u[i] * uab[i]) / p_tilde,
            sum(&|i| q[i] * uab[i] * uab[i]) / p_tilde,
        )
    } else {
        (0.0, 0.0, 0.0)
    };
    let e_d2 = sum(&|i| q[i] * u[i] * d[i] * d[i]);

    let x_dis: Vec<f64> = (0..k)
        .map(|i| if supp[i] { -xlogy(uab[i], d[i]) } else { 0.0 })
        .collect();
    let x_mix: Vec<f64> = (0..k)
        .map(|i| {
            if supp[i] && u_bar > 0.0 {
                xlogy(uab[i], d[i] / u_bar)
            } else {
                0.0
            }
        })
        .collect();
    let x_ec: Vec<f64> = (0..k)
        .map(|i| if supp[i] { -xlogy(uab[i], u_bar) } else { 0.0 })
        .collect();

    let d_on: Vec<f64> = (0..k).filter(|&i| supp[i]).map(|i| d[i]).collect();
    let d_range = (
        d_on.iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
            .min(f64::MAX),
        d_on.iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
            .max(0.0),
    );
    let d_range = if d_on.is_empty() { (0.0, 0.0) } else { d_range };

    CellEntropy {
        a,
        b,
        u_bar,
        s_ec: -xlogx(u_bar),
        s_dis,
        s_mix,
        s_ns,
        p_tilde,
        phi,
        lambda,
        gamma,
        e_d2,
        ns_s_dis: cov_with_u(q, u, &x_dis),
        ns_s_mix: cov_with_u(q, u, &x_mix),
        ns_s_ec: cov_with_u(q, u, &x_ec),
        d_range,
    }
}

fn check_partitions(p: &Process, part_a: &Partition, part_b: &Partition) -> Result<()> {
    if part_a.size() != p.source().len() {
        return Err(Error::Invalid(
            "parent partition does not match the source type set".into(),
        ));
    }
    if part_b.size() != p.target().len() {
        return Err(Error::Invalid(
            "child partition does not match the target type set".into(),
        ));
    }
    Ok(())
}

/// Environmental entropy profile of `p` on the joint partition `(part_a, part_b)`.
pub fn environmental_profile(
    p: &Process,
    part_a: &Partition,
    part_b: &Partition,
) -> Result<EntropyProfile> {
    check_partitions(p, part_a, part_b)?;
    let q = p.source().probabilities();
    let k = p.source().len();
    let k2 = p.target().len();
    let mut per_cell = Vec::with_capacity(part_a.blocks().len() * part_b.blocks().len());
    for a in 0..part_a.blocks().len() {
        let am = part_a.mask(a, k);
        for b in 0..part_b.blocks().len() {
            per_cell.push(cell(p, &q, &am, &part_b.mask(b, k2), a, b));
        }
    }
    let total = |f: fn(&CellEntropy) -> f64| kahan_sum(per_cell.iter().map(f));
    let s_ec = total(|c| c.s_ec);
    let s_ns = selective_entropy(p);
    Ok(EntropyProfile {
        s_ns,
        s_ec,
        s_dis: total(|c| c.s_dis),
        s_mix: total(|c| c.s_mix),
        s_tot: s_ns + s_ec,
        per_cell,
    })
}

/// Profile at the singleton (generating) partitions.
pub fn generating_profile(p: &Process) -> EntropyProfile {
    environmental_profile(
        p,
        &Partition::singletons(p.source().len()),
        &Partition::singletons(p.target().len()),
    )
    .expect("singleton partitions always match")
}

/// `S_tot = S_NS + S_EC` at the generating partition.
pub fn total_entropy(p: &Process) -> f64 {
    generating_profile(p).s_tot
}

/// Local selective entropy `𝔼[−U_{A,B} log U]` of blocks given by positions.
pub fn local_selective_entropy(p: &Process, a: &[usize], b: &[usize]) -> Result<f64> {
    let k = p.source().len();
    let k2 = p.target().len();
    let mask = |block: &[usize], n: usize| -> Result<Vec<bool>> {
        if block.is_empty() {
            return Err(Error::Invalid("empty block".into()));
        }
        let mut m = vec![false; n];
        for &i in block {
            if i >= n {
                return Err(Error::Invalid(format!("type position {i} out of range")));
            }
            m[i] = true;
        }
        Ok(m)
    };
    let q = p.source().probabilities();
    Ok(cell(p, &q, &mask(a, k)?, &mask(b, k2)?, 0, 0).s_ns)
}

/// Outcome of an environmental-equilibrium check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumCheck {
    /// Whether `D` is constant on the support of every cell with `p̃ > 0`.
    pub holds: bool,
    /// `(a, b, min D, max D)` for every cell with `p̃ > 0`.
    pub witnesses: Vec<(usize, usize, f64, f64)>,
}

/// Environmental equilibrium on a joint partition (`D_{A,B}` constant on
/// each cell's support, within the saturation tolerance).
pub fn environmental_equilibrium(
    p: &Process,
    part_a: &Partition,
    part_b: &Partition,
) -> Result<EquilibriumCheck> {
    let sat = tolerance::current().sat;
    let profile = environmental_profile(p, part_a, part_b)?;
    let witnesses: Vec<_> = profile
        .per_cell
        .iter()
        .filter(|c| c.p_tilde > 0.0)
        .map(|c| (c.a, c.b, c.d_range.0, c.d_range.1))
        .collect();
    let holds = witnesses.iter().all(|w| w.3 - w.2 <= sat);
    Ok(EquilibriumCheck { holds, witnesses })
}

fn cells_with_mass(profile: &EntropyProfile) -> impl Iterator<Item = &CellEntropy> {
    profile
        .per_cell
        .iter()
        .filter(|c| c.p_tilde > 0.0 && c.u_bar > 0.0)
}

/// Jensen chains for dispersion and mixing entropy at the generating partition:
///
/// ```text
/// Σ −Ū log Ū ≥ Σ Ū log(p̃/Ū) ≥ S_dis ≥ Σ Ū log(Ū/𝔼[U D²])
/// Σ −Ū log Ū ≥ Σ Ū log(𝔼[U D²]/Ū²) ≥ S_mix ≥ Σ Ū log(1/p̃)
/// ```
pub fn dispersion_mixing_bounds(p: &Process) -> (LawReport, LawReport) {
    dispersion_mixing_from_profile(
        &generating_profile(p),
        EquilibriumClass::of(&Distribution::of(p)),
    )
}

/// The chains of [`dispersion_mixing_bounds`] evaluated on an arbitrary
/// profile (any partition, or a quantum partition profile).
pub fn dispersion_mixing_from_profile(
    profile: &EntropyProfile,
    class: EquilibriumClass,
) -> (LawReport, LawReport) {
    let sum = |f: &dyn Fn(&CellEntropy) -> f64| kahan_sum(cells_with_mass(profile).map(f));
    let ec = profile.s_ec;
    let dis = LawReport::chain(
        "dispersion_entropy_bounds",
        vec![
            ("sum -U log U", ec),
            (
                "sum U log(p/U)",
                sum(&|c| xlogy(c.u_bar, c.p_tilde / c.u_bar)),
            ),
            ("S_dis", profile.s_dis),
            (
                "sum U log(U/E[U D^2])",
                sum(&|c| xlogy(c.u_bar, c.u_bar / c.e_d2)),
            ),
        ],
        2,
        vec![false, false, false],
        class,
    );
    let mix = LawReport::chain(
        "mixing_entropy_bounds",
        vec![
            ("sum -U log U", ec),
            (
                "sum U log(E[U D^2]/U^2)",
                sum(&|c| xlogy(c.u_bar, c.e_d2 / (c.u_bar * c.u_bar))),
            ),
            ("S_mix", profile.s_mix),
            ("sum U log(1/p)", sum(&|c| -xlogy(c.u_bar, c.p_tilde))),
        ],
        2,
        vec![false, false, false],
        class,
    );
    (dis, mix)
}

/// Selective change of the environmental entropies with their windows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThirdLaw {
    /// `∂_NS S_EC` with window `[lower, upper]` = sum of the two below.
    pub ec: LawReport,
    /// `∂_NS S_dis` and its window.
    pub dis: LawReport,
    /// `∂_NS S_mix` and its window.
    pub mix: LawReport,
    /// `∂_NS S_EC − ∂_NS S_dis − ∂_NS S_mix`.
    pub decomposition_residual: f64,
}

/// Selective changes `Σ cov(·, U)` of the dispersion, mixing and
/// environmental entropies on a joint partition, each inside its Jensen window
///
/// ```text
/// ∂_NS S_dis ∈ Σ [p̃λ log(λ/γ) − Ū log(p̃/Ū),  p̃λ log(φ/λ) − Ū log(Ū/𝔼[U D²])]
/// ∂_NS S_mix ∈ Σ [p̃λ log(λ/(φŪ)) − Ū log(𝔼[U D²]/Ū²),  p̃λ log(γ/(λŪ)) − Ū log(1/p̃)]
/// ```
///
/// and the environmental window the sum of both. The values are reported as
/// computed; they need not vanish.
pub fn third_law(p: &Process, part_a: &Partition, part_b: &Partition) -> Result<ThirdLaw> {
    let profile = environmental_profile(p, part_a, part_b)?;
    Ok(third_law_from_profile(
        &profile,
        EquilibriumClass::of(&Distribution::of(p)),
    ))
}

/// The windows of [`third_law`] evaluated on an arbitrary profile, using the
/// per-cell selective changes and fluctuation coefficients it carries.
pub fn third_law_from_profile(profile: &EntropyProfile, class: EquilibriumClass) -> ThirdLaw {
    let sum = |f: &dyn Fn(&CellEntropy) -> f64| kahan_sum(cells_with_mass(profile).map(f));
    let all = |f: fn(&CellEntropy) -> f64| kahan_sum(profile.per_cell.iter().map(f));
    let pl = |c: &CellEntropy| c.p_tilde * c.lambda;

    let dis_lo = sum(&|c| xlogy(pl(c), c.lambda / c.gamma) - xlogy(c.u_bar, c.p_tilde / c.u_bar));
    let dis_hi = sum(&|c| xlogy(pl(c), c.phi / c.lambda) - xlogy(c.u_bar, c.u_bar / c.e_d2));
    let mix_lo = sum(&|c| {
        xlogy(pl(c), c.lambda / (c.phi * c.u_bar)) - xlogy(c.u_bar, c.e_d2 / (c.u_bar * c.u_bar))
    });
    let mix_hi = sum(&|c| xlogy(pl(c), c.gamma / (c.lambda * c.u_bar)) + xlogy(c.u_bar, c.p_tilde));

    let ns_dis = all(|c| c.ns_s_dis);
    let ns_mix = all(|c| c.ns_s_mix);
    let ns_ec = all(|c| c.ns_s_ec);
    let window = |name: &str, lhs_label: &str, hi: f64, lhs: f64, lo: f64| {
        LawReport::chain(
            name,
            vec![("upper", hi), (lhs_label, lhs), ("lower", lo)],
            1,
            vec![false, false],
            class,
        )
    };
    ThirdLaw {
        ec: window(
            "third_law_ec",
            "d_NS S_EC",
            dis_hi + mix_hi,
            ns_ec,
            dis_lo + mix_lo,
        ),
        dis: window("third_law_dis", "d_NS S_dis", dis_hi, ns_dis, dis_lo),
        mix: window("third_law_mix", "d_NS S_mix", mix_hi, ns_mix, mix_lo),
        decomposition_residual: ns_ec - ns_dis - ns_mix,
    }
}
