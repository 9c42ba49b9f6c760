//! The diagnostic report assembled by `price-kit report`.

use entropy::{
    dispersion_mixing_bounds, environmental_equilibrium, environmental_profile, generating_profile, ks_entropy,
    reversibility, third_law, EntropyProfile, EquilibriumCheck, IntergenerationalChange, ReversibilityVerdict,
    ThirdLaw,
};
use laws::{
    ec_selective_entropy_bound, ec_variance_bound, exp_first_law, first_law, higher_order_first_law,
    multilevel_second_law, second_law, selective_acceleration, selective_entropy_bounds, speed_limits, stationarity,
    zeroth_law, Distribution, LawReport, StationarityClass, DEFAULT_C_GRID,
};
use measure_core::{Population, Result};
use open_process::{dual_fitness_kgs, kgs, DualFitnessKgs, KgsDecomposition, OpenProcess};
use price::{fisher, price, FisherDecomposition, PriceDecomposition};
use process_core::{classify_purity, compose, price_factorize, Process};
use quantum::{
    eigh, q_factorize, q_laws, q_partition_entropy, q_price, CMatrix, QuantumLaws, QuantumObservable,
    QuantumPartitionEntropy, QuantumPriceDecomposition, QuantumProcess, POSITIVITY_PROBES,
};
use serde::Serialize;
use serde_json::Value;

use crate::input::ProcessSpecFile;

/// Version of the report layout.
pub const SCHEMA_VERSION: u32 = 1;

/// KS entropy horizon reported for endomorphic processes.
pub const KS_HORIZON: usize = 3;

/// Which optional sections to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sections {
    /// Selection laws.
    pub laws: bool,
    /// Entropies, reversibility and KS entropy.
    pub entropy: bool,
    /// Quantum diagnostics (from the `quantum` section, or the diagonal embedding).
    pub quantum: bool,
    /// Open-process diagnostics (needs an `open` section).
    pub kgs: bool,
}

impl Sections {
    /// Every section.
    pub const ALL: Sections = Sections { laws: true, entropy: true, quantum: true, kgs: true };
}

/// Population summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PopulationSummary {
    /// Type labels.
    pub types: Vec<String>,
    /// Weights.
    pub weights: Vec<f64>,
    /// Total mass.
    pub size: f64,
}

impl From<&Population> for PopulationSummary {
    fn from(p: &Population) -> Self {
        Self { types: p.types().labels().to_vec(), weights: p.weights().to_vec(), size: p.size() }
    }
}

/// Fitness summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitnessSummary {
    /// `W`.
    pub w: Vec<f64>,
    /// `W̄`.
    pub wbar: f64,
    /// `U`.
    pub u: Vec<f64>,
}

/// Selective/environmental factorization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorizationSummary {
    /// Parent positions kept in the intermediate population.
    pub support: Vec<usize>,
    /// Intermediate population `W·μ`.
    pub intermediate_weights: Vec<f64>,
    /// Environmental kernel from the intermediate population to `μ′`.
    pub environmental_kernel: Vec<Vec<f64>>,
    /// Largest entry of `w_NS w_EC − w`.
    pub composition_residual: f64,
}

/// Price decomposition for a named observable pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PriceEntry {
    /// Parent observable.
    pub x: String,
    /// Child observable.
    pub y: String,
    /// Decomposition.
    pub decomposition: PriceDecomposition,
}

/// Selection laws.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LawsSection {
    /// Zeroth law.
    pub zeroth: LawReport,
    /// Gibbs bounds on `S_NS`.
    pub gibbs: LawReport,
    /// First law.
    pub first: LawReport,
    /// Higher-order first laws, orders 2 and 3.
    pub higher_order: Vec<LawReport>,
    /// Exponential first law.
    pub exp_first: LawReport,
    /// Second law.
    pub second: LawReport,
    /// Selective speed limits.
    pub speed_limits: LawReport,
    /// Selective acceleration.
    pub acceleration: LawReport,
}

/// Environmental entropies and reversibility.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropySection {
    /// Profile at the singleton partitions.
    pub generating: EntropyProfile,
    /// Profile at the partitions of the description, when given.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition: Option<EntropyProfile>,
    /// Dispersion-entropy chain.
    pub dispersion: LawReport,
    /// Mixing-entropy chain.
    pub mixing: LawReport,
    /// Selective changes and third-law windows at the report partitions.
    pub third_law: ThirdLaw,
    /// Environmental equilibrium at the report partitions.
    pub equilibrium: EquilibriumCheck,
    /// Invertibility of the environmental factor.
    pub reversibility: ReversibilityVerdict,
    /// `T`-step KS entropies, `T = 1..=3`, for endomorphic processes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ks_entropy: Option<Vec<f64>>,
}

/// Diagnostics of a composable pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairSection {
    /// Stationarity flags.
    pub stationarity: StationarityClass,
    /// Fisher decomposition.
    pub fisher: FisherDecomposition,
    /// Lower bound on `∂_EC(var U, var′ U′)`.
    pub ec_variance_bound: LawReport,
    /// Upper bound on `∂_EC(S_NS, S′_NS)`.
    pub ec_selective_entropy_bound: LawReport,
    /// Multi-level second law.
    pub multilevel_second_law: LawReport,
    /// Intergenerational change of the environmental entropy.
    pub intergenerational: IntergenerationalChange,
}

/// Open-process diagnostics for a named observable pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KgsEntry {
    /// Parent observable.
    pub x: String,
    /// Child observable.
    pub y: String,
    /// Three-term decomposition.
    pub kgs: KgsDecomposition,
    /// Dual-fitness form.
    pub dual: DualFitnessKgs,
}

/// Quantum Price decomposition for a named observable pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantumPriceEntry {
    /// Parent observable.
    pub x: String,
    /// Child observable.
    pub y: String,
    /// Left and right decompositions.
    pub decomposition: QuantumPriceDecomposition,
}

/// Quantum diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantumSection {
    /// Whether the process is the diagonal embedding of the classical one.
    pub embedded: bool,
    /// Positivity was checked on this many random pure states, not proven.
    pub positivity_probes: usize,
    /// Eigenvalues of `W`.
    pub w_eigenvalues: Vec<f64>,
    /// `W̄`.
    pub wbar: f64,
    /// Selection laws on the spectrum of `U`.
    pub laws: QuantumLaws,
    /// Largest entry of `𝒲_EC 𝒲_NS − 𝒲 P_W`.
    pub factorization_residual: f64,
    /// Trace-preservation residual of `𝒲_EC` on the support of `W`.
    pub factorization_trace_residual: f64,
    /// Left/right Price decompositions.
    pub price: Vec<QuantumPriceEntry>,
    /// Partition entropies.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition_entropy: Option<QuantumPartitionEntropy>,
}

/// Full diagnostic report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    /// Layout version.
    pub schema_version: u32,
    /// Parent population.
    pub source: PopulationSummary,
    /// Child population.
    pub target: PopulationSummary,
    /// Fitness.
    pub fitness: FitnessSummary,
    /// `purely_selective`, `purely_environmental` or `mixed`.
    pub purity: String,
    /// Factorization.
    pub factorization: FactorizationSummary,
    /// Price decompositions for every named observable pair.
    pub price: Vec<PriceEntry>,
    /// Selection laws.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub laws: Option<LawsSection>,
    /// Entropies.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entropy: Option<EntropySection>,
    /// Diagnostics of the pair formed with the `next` process.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<PairSection>,
    /// Open-process diagnostics.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kgs: Option<Vec<KgsEntry>>,
    /// Quantum diagnostics.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quantum: Option<QuantumSection>,
}

fn factorization(p: &Process) -> Result<FactorizationSummary> {
    let f = price_factorize(p)?;
    let composed = compose(&f.selective, &f.environmental)?;
    let composition_residual = composed
        .kernel()
        .iter()
        .zip(p.kernel())
        .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
        .fold(0.0, f64::max);
    Ok(FactorizationSummary {
        support: f.support,
        intermediate_weights: f.environmental.source().weights().to_vec(),
        environmental_kernel: f.environmental.kernel().to_vec(),
        composition_residual,
    })
}

/// Selection laws of a process.
pub fn laws_section(p: &Process) -> Result<LawsSection> {
    let d = Distribution::of(p);
    Ok(LawsSection {
        zeroth: zeroth_law(&d),
        gibbs: selective_entropy_bounds(&d),
        first: first_law(&d),
        higher_order: vec![higher_order_first_law(&d, 2)?, higher_order_first_law(&d, 3)?],
        exp_first: exp_first_law(&d),
        second: second_law(&d),
        speed_limits: speed_limits(&d, &DEFAULT_C_GRID)?,
        acceleration: selective_acceleration(&d),
    })
}

fn entropy_section(spec: &ProcessSpecFile, p: &Process) -> Result<EntropySection> {
    let (a, b) = spec.partitions(p)?;
    let (dispersion, mixing) = dispersion_mixing_bounds(p);
    Ok(EntropySection {
        generating: generating_profile(p),
        partition: match spec.partitions {
            Some(_) => Some(environmental_profile(p, &a, &b)?),
            None => None,
        },
        dispersion,
        mixing,
        third_law: third_law(p, &a, &b)?,
        equilibrium: environmental_equilibrium(p, &a, &b)?,
        reversibility: reversibility(p)?,
        ks_entropy: if p.is_endomorphic() { ks_entropy(p, KS_HORIZON).ok() } else { None },
    })
}

fn pair_section(p: &Process, q: &Process) -> Result<PairSection> {
    Ok(PairSection {
        stationarity: stationarity(p, q)?,
        fisher: fisher(p, q)?,
        ec_variance_bound: ec_variance_bound(p, q)?,
        ec_selective_entropy_bound: ec_selective_entropy_bound(p, q)?,
        multilevel_second_law: multilevel_second_law(p, q)?,
        intergenerational: entropy::intergenerational_ec_change(p, q)?,
    })
}

fn kgs_section(spec: &ProcessSpecFile, p: &Process) -> Result<Option<Vec<KgsEntry>>> {
    let Some(open) = &spec.open else { return Ok(None) };
    let open = OpenProcess::with_orphans(p.clone(), open.orphan_weights.clone())?;
    let mut out = Vec::new();
    for (xn, x) in spec.observables_on(p.source()) {
        for (yn, y) in spec.observables_on(open.full_target()) {
            out.push(KgsEntry { x: xn.clone(), y: yn, kgs: kgs(&open, &x, &y)?, dual: dual_fitness_kgs(&open, &x, &y)? });
        }
    }
    Ok(Some(out))
}

fn unit_projections(d: usize) -> Vec<CMatrix> {
    (0..d)
        .map(|k| {
            let mut m = CMatrix::zeros(d, d);
            m[(k, k)] = num_complex::Complex64::new(1.0, 0.0);
            m
        })
        .collect()
}

fn quantum_section(spec: &ProcessSpecFile, p: &Process) -> Result<QuantumSection> {
    let (q, embedded) = match &spec.quantum {
        Some(qs) => (qs.process()?, false),
        None => (QuantumProcess::embed(p), true),
    };
    let (d, d2) = (q.source().dim(), q.target().dim());
    let (xs, ys): (Vec<(String, QuantumObservable)>, Vec<(String, QuantumObservable)>) = match &spec.quantum {
        Some(qs) => (qs.observables_of_dim(d)?, qs.observables_of_dim(d2)?),
        None => {
            let embed = |v: Vec<(String, measure_core::Observable)>| {
                v.into_iter().map(|(n, o)| (n, QuantumObservable::embed(&o))).collect()
            };
            (embed(spec.observables_on(p.source())), embed(spec.observables_on(p.target())))
        }
    };
    let mut price = Vec::new();
    for (xn, x) in &xs {
        for (yn, y) in &ys {
            price.push(QuantumPriceEntry { x: xn.clone(), y: yn.clone(), decomposition: q_price(&q, x, y)? });
        }
    }
    let projections = match &spec.quantum {
        Some(qs) => qs.projections()?,
        None => Some((unit_projections(d), unit_projections(d2))),
    };
    let partition_entropy = match projections {
        Some((a, b)) => Some(q_partition_entropy(&q, &a, &b)?),
        None => None,
    };
    let fac = q_factorize(&q);
    Ok(QuantumSection {
        embedded,
        positivity_probes: POSITIVITY_PROBES,
        w_eigenvalues: eigh(q.w().matrix()).0,
        wbar: q.wbar(),
        laws: q_laws(&q),
        factorization_residual: fac.composition_residual,
        factorization_trace_residual: fac.trace_residual,
        price,
        partition_entropy,
    })
}

/// Builds the report for a description.
pub fn build_report(spec: &ProcessSpecFile, sections: Sections) -> Result<Report> {
    let p = spec.process()?;
    let mut price_entries = Vec::new();
    for (xn, x) in spec.observables_on(p.source()) {
        for (yn, y) in spec.observables_on(p.target()) {
            price_entries.push(PriceEntry { x: xn.clone(), y: yn, decomposition: price(&p, &x, &y)? });
        }
    }
    let next = spec.next_process(&p)?;
    let fit = p.fitness();
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        source: p.source().into(),
        target: p.target().into(),
        fitness: FitnessSummary { w: fit.w.values().to_vec(), wbar: fit.wbar, u: fit.u.values().to_vec() },
        purity: classify_purity(&p).as_str().to_string(),
        factorization: factorization(&p)?,
        price: price_entries,
        laws: if sections.laws { Some(laws_section(&p)?) } else { None },
        entropy: if sections.entropy { Some(entropy_section(spec, &p)?) } else { None },
        pair: match &next {
            Some(q) => Some(pair_section(&p, q)?),
            None => None,
        },
        kgs: if sections.kgs { kgs_section(spec, &p)? } else { None },
        quantum: if sections.quantum { Some(quantum_section(spec, &p)?) } else { None },
    })
}

/// JSON paths of `null` values. Optional fields are omitted rather than
/// written as `null`, so every `null` is a non-finite number.
pub fn non_finite_paths(v: &Value) -> Vec<String> {
    fn walk(v: &Value, path: String, out: &mut Vec<String>) {
        match v {
            Value::Null => out.push(path),
            Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| walk(x, format!("{path}[{i}]"), out)),
            Value::Object(o) => o.iter().for_each(|(k, x)| walk(x, format!("{path}.{k}"), out)),
            _ => {}
        }
    }
    let mut out = Vec::new();
    walk(v, String::from("$"), &mut out);
    out
}
