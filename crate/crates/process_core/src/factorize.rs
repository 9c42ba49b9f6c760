use measure_core::{tolerance, Population, Result};

use crate::process::Process;

/// The factorization `w = w_EC ∘ w_NS` of a process.
#[derive(Debug, Clone, PartialEq)]
pub struct Factorization {
    /// Purely selective factor: `diag(W)` from μ to the intermediate
    /// population `W·μ`, whose types are the childbearing types.
    pub selective: Process,
    /// Purely environmental factor: rows `w[i][·]/W(i)` from `W·μ` to μ′.
    pub environmental: Process,
    /// Source positions kept in the intermediate population (`W(i) > 0`);
    /// childless types carry no intermediate mass and are dropped.
    pub support: Vec<usize>,
}

/// Splits a process into a purely selective factor followed by a purely
/// environmental (row-stochastic) factor.
pub fn price_factorize(p: &Process) -> Result<Factorization> {
    let tol = tolerance::current();
    let w = p.w();
    let support: Vec<usize> = (0..w.len()).filter(|&i| tol.snap(w[i]) > 0.0).collect();
    let mid_types = p.source().types().restrict(&support)?;
    let mid_weights: Vec<f64> = support.iter().map(|&i| w[i] * p.source().weights()[i]).collect();
    let mid = Population::new(mid_types, mid_weights)?;

    let selective_kernel: Vec<Vec<f64>> = (0..w.len())
        .map(|i| support.iter().map(|&s| if s == i { w[i] } else { 0.0 }).collect())
        .collect();
    let selective = Process::new(p.source().clone(), mid.clone(), selective_kernel)?;

    let env_kernel: Vec<Vec<f64>> =
        support.iter().map(|&i| p.kernel()[i].iter().map(|v| v / w[i]).collect()).collect();
    let environmental = Process::new(mid, p.target().clone(), env_kernel)?;
    Ok(Factorization { selective, environmental, support })
}

/// Purity class of a process.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Purity {
    /// Diagonal kernel on a shared type set with non-constant fitness.
    PurelySelective,
    /// Constant relative fitness `U ≡ 1` (a Markov chain up to scaling).
    PurelyEnvironmental,
    /// Neither.
    Mixed,
}

impl Purity {
    /// Snake-case name used in reports.
    pub fn as_str(self) -> &'static str {
        match self {
            Purity::PurelySelective => "purely_selective",
            Purity::PurelyEnvironmental => "purely_environmental",
            Purity::Mixed => "mixed",
        }
    }
}

impl Process {
    /// `U ≡ 1` within the relative tolerance.
    pub fn is_purely_environmental(&self) -> bool {
        let rel = tolerance::current().rel;
        self.u().iter().all(|u| (u - 1.0).abs() <= rel)
    }

    /// Shared type set and a kernel that is diagonal within the zero tolerance.
    ///
    /// Types are compared by label, so a selective factor whose intermediate
    /// population drops childless types is still recognised: every kernel
    /// entry must connect a type to the target type with the same label.
    pub fn is_purely_selective(&self) -> bool {
        let tol = tolerance::current();
        let src = self.source().types().labels();
        let dst = self.target().types().labels();
        if self.source().types() != self.target().types()
            && !dst.iter().all(|l| src.contains(l))
        {
            return false;
        }
        self.kernel().iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, v)| src[i] == dst[j] || tol.is_zero(*v))
        })
    }
}

/// Classifies a process. A process that is both diagonal and of constant
/// fitness (a uniform rescaling) is reported as purely environmental; use
/// [`Process::is_purely_selective`] to test the selective property alone.
pub fn classify_purity(p: &Process) -> Purity {
    if p.is_purely_environmental() {
        Purity::PurelyEnvironmental
    } else if p.is_purely_selective() {
        Purity::PurelySelective
    } else {
        Purity::Mixed
    }
}
