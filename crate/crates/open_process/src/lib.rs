//! Open evolutionary processes and the Kerr-Godfrey-Smith equation.
//!
//! An open process splits the child population `μ′` into a parented deme
//! `μ′_π = π·μ′`, produced by a closed process `w_π : μ → μ′_π`, and an
//! orphaned deme `μ′_ν = ν·μ′` with `π + ν = 1`. The change of mean then has
//! a third term carried by the orphans:
//!
//! ```text
//! 𝔼′[Y] − 𝔼[X] = cov(X, U) + 𝔼[(⟨Y⟩_{w_π} − X)·U] + cov′(Y, ν)/p′_π
//!               = cov(X, U) + 𝔼[(⟨Y⟩_{w_π} − X)·U] − cov′(Y, π)/p′_π
//! ```
//!
//! with `U` the relative fitness of the closed process and `p′_π = N′_π/N′`.

use measure_core::{expectation, kahan_sum, tolerance, Error, Observable, Population, Result};
use price::price;
use process_core::Process;
use serde::{Deserialize, Serialize};

/// A closed process into the parented deme together with the full child
/// population.
#[derive(Debug, Clone, PartialEq)]
pub struct OpenProcess {
    closed: Process,
    full_target: Population,
    parented: Observable,
    orphaned: Observable,
}

impl OpenProcess {
    /// Builds an open process from the closed process `w_π : μ → μ′_π` and the
    /// full child population `μ′ ≥ μ′_π`. The densities are `π = μ′_π/μ′`
    /// (taken as 1 where `μ′` vanishes) and `ν = 1 − π`.
    pub fn new(closed: Process, full_target: Population) -> Result<Self> {
        let tol = tolerance::current();
        if closed.target().types() != full_target.types() {
            return Err(Error::TypeMismatch("closed process and full child population differ in types".into()));
        }
        let mut pi = Vec::with_capacity(full_target.len());
        for (j, (&parented, &full)) in closed.target().weights().iter().zip(full_target.weights()).enumerate() {
            let scale = 1f64.max(parented).max(full);
            if parented > full + tol.rel * scale {
                return Err(Error::Validation(format!(
                    "parented mass {parented} exceeds child mass {full} at {}",
                    full_target.types().labels()[j]
                )));
            }
            pi.push(if tol.snap(full) > 0.0 { (parented / full).min(1.0) } else { 1.0 });
        }
        let nu = pi.iter().map(|p| 1.0 - p).collect();
        let types = full_target.types().clone();
        Ok(Self {
            closed,
            full_target,
            parented: Observable::new(types.clone(), pi)?,
            orphaned: Observable::new(types, nu)?,
        })
    }

    /// Builds an open process from the closed process and a non-negative
    /// orphan increment, `μ′ = μ′_π + orphans`.
    pub fn with_orphans(closed: Process, orphans: Vec<f64>) -> Result<Self> {
        if orphans.len() != closed.target().len() {
            return Err(Error::Shape(format!("{} orphan weights for {} child types", orphans.len(), closed.target().len())));
        }
        let full: Vec<f64> = closed.target().weights().iter().zip(&orphans).map(|(a, b)| a + b).collect();
        let full_target = Population::new(closed.target().types().clone(), full)?;
        Self::new(closed, full_target)
    }

    /// Closed process `w_π : μ → μ′_π`.
    pub fn closed(&self) -> &Process {
        &self.closed
    }

    /// Full child population `μ′`.
    pub fn full_target(&self) -> &Population {
        &self.full_target
    }

    /// Parented density `π = dμ′_π/dμ′`.
    pub fn parented_density(&self) -> &Observable {
        &self.parented
    }

    /// Orphaned density `ν = 1 − π`.
    pub fn orphan_density(&self) -> &Observable {
        &self.orphaned
    }

    /// Parented proportion `p′_π = N′_π/N′`.
    pub fn p_parented(&self) -> f64 {
        self.closed.target().size() / self.full_target.size()
    }

    fn check(&self, x: &Observable, y: &Observable) -> Result<f64> {
        x.check_on(self.closed.source())?;
        y.check_on(&self.full_target)?;
        let p = self.p_parented();
        if tolerance::current().snap(p) <= 0.0 {
            return Err(Error::Degenerate("every child is an orphan".into()));
        }
        Ok(p)
    }
}

/// Terms of the Kerr-Godfrey-Smith equation in both orphan forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KgsDecomposition {
    /// `𝔼′[Y] − 𝔼[X]` over the full child population.
    pub delta: f64,
    /// `cov(X, U)` with `U` the relative fitness of the closed process.
    pub selection: f64,
    /// `𝔼[(⟨Y⟩_{w_π} − X)·U]`.
    pub transmission: f64,
    /// `cov′(Y, ν)/p′_π`.
    pub orphan_nu: f64,
    /// `−cov′(Y, π)/p′_π`.
    pub orphan_pi: f64,
    /// `p′_π`.
    pub p_parented: f64,
    /// `delta − (selection + transmission + orphan_nu)`.
    pub residual_nu: f64,
    /// `delta − (selection + transmission + orphan_pi)`.
    pub residual_pi: f64,
    /// `𝔼′[Yπ] − p′_π·𝔼[⟨Y⟩_{w_π} U]` (open tower property).
    pub tower_residual: f64,
}

impl KgsDecomposition {
    /// Both residuals and the tower residual are within `rel` relative to the
    /// largest term.
    pub fn holds(&self, rel: f64) -> bool {
        let scale = [1.0, self.delta, self.selection, self.transmission, self.orphan_nu]
            .iter()
            .fold(0f64, |m, v| m.max(v.abs()));
        [self.residual_nu, self.residual_pi, self.tower_residual].iter().all(|r| r.abs() <= rel * scale)
    }
}

fn full_cov(pop: &Population, a: &[f64], b: &[f64]) -> f64 {
    let q = pop.probabilities();
    let ma = kahan_sum(q.iter().zip(a).map(|(q, v)| q * v));
    let mb = kahan_sum(q.iter().zip(b).map(|(q, v)| q * v));
    kahan_sum((0..q.len()).map(|i| q[i] * (a[i] - ma) * (b[i] - mb)))
}

/// The Kerr-Godfrey-Smith decomposition of `𝔼′[Y] − 𝔼[X]` in its ν- and π-forms.
pub fn kgs(p: &OpenProcess, x: &Observable, y: &Observable) -> Result<KgsDecomposition> {
    let pp = p.check(x, y)?;
    let closed = &p.closed;
    let u = closed.u();
    let src = closed.source();
    let delta = expectation(&p.full_target, y)? - expectation(src, x)?;
    // The selection and transmission terms are those of the closed process.
    let closed_price = price(closed, x, y)?;
    let (selection, transmission) = (closed_price.ns, closed_price.ec);
    let avg = closed.local_average_values(y.values());
    let q = src.probabilities();
    let orphan_nu = full_cov(&p.full_target, y.values(), p.orphaned.values()) / pp;
    let orphan_pi = -full_cov(&p.full_target, y.values(), p.parented.values()) / pp;
    let y_pi: Vec<f64> = y.values().iter().zip(p.parented.values()).map(|(a, b)| a * b).collect();
    let tower_lhs = kahan_sum(p.full_target.probabilities().iter().zip(&y_pi).map(|(q, v)| q * v));
    let tower_rhs = pp * kahan_sum((0..q.len()).map(|i| q[i] * avg[i] * u[i]));
    Ok(KgsDecomposition {
        delta,
        selection,
        transmission,
        orphan_nu,
        orphan_pi,
        p_parented: pp,
        residual_nu: delta - (selection + transmission + orphan_nu),
        residual_pi: delta - (selection + transmission + orphan_pi),
        tower_residual: tower_lhs - tower_rhs,
    })
}

/// Dual-fitness form of the Kerr-Godfrey-Smith equation against counting
/// measure on the child types.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualFitnessKgs {
    /// `W*_π(i′) = Σ_i μ(i)·w_π(i, i′)`, the parented child mass at `i′`.
    pub dual_fitness: Vec<f64>,
    /// `𝔼′[Y] − 𝔼[X]`.
    pub delta: f64,
    /// `cov(X, U)`.
    pub selection: f64,
    /// `𝔼[(⟨Y⟩_{w_π} − X)·U]`.
    pub transmission: f64,
    /// Third term through the dual fitness, `𝔼′[Y] − (1/N′_π) Σ Y·W*_π`.
    pub orphan_dual: f64,
    /// The form `1 − (1/N′_π) Σ Y·W*_π`, which equals `orphan_dual` only when `𝔼′[Y] = 1`.
    pub orphan_dual_unit: f64,
    /// `(1/N′_π) Σ W*_π`, equal to 1.
    pub counting_identity: f64,
    /// The deme expectation `𝔼′_π[W*_π] = (1/N′_π) Σ W*_π·μ′_π`, not 1 in general.
    pub deme_expectation: f64,
    /// `(1/p′_π)·𝔼′[W*_π]`, not 1 in general.
    pub full_expectation_ratio: f64,
    /// `delta − (selection + transmission + orphan_dual)`.
    pub residual: f64,
    /// `delta − (selection + transmission + orphan_dual_unit)`.
    pub residual_unit: f64,
}

/// The Kerr-Godfrey-Smith decomposition with the orphan term written through
/// the dual fitness `W*_π`.
pub fn dual_fitness_kgs(p: &OpenProcess, x: &Observable, y: &Observable) -> Result<DualFitnessKgs> {
    let base = kgs(p, x, y)?;
    let closed = &p.closed;
    let mu = closed.source().weights();
    let k2 = p.full_target.len();
    let dual: Vec<f64> = (0..k2).map(|j| kahan_sum(closed.kernel().iter().zip(mu).map(|(row, m)| m * row[j]))).collect();
    let n_pi = closed.target().size();
    let y_dual = kahan_sum(y.values().iter().zip(&dual).map(|(a, b)| a * b)) / n_pi;
    let e_y = expectation(&p.full_target, y)?;
    let orphan_dual = e_y - y_dual;
    let orphan_dual_unit = 1.0 - y_dual;
    let counting_identity = kahan_sum(dual.iter().copied()) / n_pi;
    let deme_expectation = kahan_sum(dual.iter().zip(closed.target().weights()).map(|(a, b)| a * b)) / n_pi;
    let e_full = kahan_sum(dual.iter().zip(p.full_target.weights()).map(|(a, b)| a * b)) / p.full_target.size();
    let head = base.selection + base.transmission;
    Ok(DualFitnessKgs {
        dual_fitness: dual,
        delta: base.delta,
        selection: base.selection,
        transmission: base.transmission,
        orphan_dual,
        orphan_dual_unit,
        counting_identity,
        deme_expectation,
        full_expectation_ratio: e_full / base.p_parented,
        residual: base.delta - (head + orphan_dual),
        residual_unit: base.delta - (head + orphan_dual_unit),
    })
}
