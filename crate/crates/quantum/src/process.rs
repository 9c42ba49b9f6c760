use measure_core::{tolerance, Error, Result};
use nalgebra::DVector;
use num_complex::Complex64;
use process_core::Process;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{c, eigh, hermiticity_residual, max_abs, unvec, vec_of, CMatrix};
use crate::operators::{diagonal, DensityOperator, QuantumObservable};

/// Number of random pure-state probes used to sample-check positivity.
pub const POSITIVITY_PROBES: usize = 64;

/// Fitness data of a quantum process.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumFitness {
    /// `W = 𝒲†(Id′)`.
    pub w: QuantumObservable,
    /// `W̄ = Tr′(μ′)/Tr(μ)`.
    pub wbar: f64,
    /// `U = W/W̄`.
    pub u: QuantumObservable,
}

/// A linear map on density matrices, stored as a `d′² × d²` superoperator
/// acting on column-major vectorised matrices, with its parent and child states.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumProcess {
    superop: CMatrix,
    source: DensityOperator,
    target: DensityOperator,
    d2: usize,
    fitness: QuantumFitness,
}

fn probe_states(d: usize) -> impl Iterator<Item = CMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0f_9a7e);
    (0..POSITIVITY_PROBES).map(move |_| {
        let v = DVector::from_fn(d, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        &v * v.adjoint()
    })
}

fn apply_superop(superop: &CMatrix, rho: &CMatrix, d2: usize) -> CMatrix {
    unvec(&(superop * vec_of(rho)), d2)
}

impl QuantumProcess {
    /// Builds a process, checking that `superop` has shape `d′² × d²`, maps
    /// Hermitian matrices to Hermitian matrices and positive states to positive
    /// states on [`POSITIVITY_PROBES`] random pure states (a sampled check,
    /// not a proof of positivity), that `target = 𝒲(source)` within `rel`, and
    /// that the fitness operator is positive semidefinite.
    pub fn new(superop: CMatrix, source: DensityOperator, target: DensityOperator) -> Result<Self> {
        let tol = tolerance::current();
        let d = source.dim();
        let d2 = target.dim();
        if superop.nrows() != d2 * d2 || superop.ncols() != d * d {
            return Err(Error::Shape(format!(
                "superoperator is {}×{}, expected {}×{}",
                superop.nrows(),
                superop.ncols(),
                d2 * d2,
                d * d
            )));
        }
        for (k, probe) in probe_states(d).enumerate() {
            let out = apply_superop(&superop, &probe, d2);
            let scale = max_abs(&out).max(1.0);
            if hermiticity_residual(&out) > tol.herm * scale {
                return Err(Error::Validation(format!("map does not preserve Hermiticity on probe {k}")));
            }
            let min = eigh(&out).0.first().copied().unwrap_or(0.0);
            if min < -tol.psd * scale {
                return Err(Error::Validation(format!(
                    "map is not positive: probe {k} of {POSITIVITY_PROBES} has output eigenvalue {min:.3e} (sampled check)"
                )));
            }
        }
        let image = apply_superop(&superop, source.matrix(), d2);
        let diff = max_abs(&(&image - target.matrix()));
        let scale = max_abs(&image).max(max_abs(target.matrix())).max(1.0);
        if diff > tol.rel * scale {
            return Err(Error::Validation(format!("target differs from the image of the source by {diff:.3e}")));
        }
        let w_mat = unvec(&(superop.adjoint() * vec_of(&CMatrix::identity(d2, d2))), d);
        let w_vals = eigh(&w_mat).0;
        let w_scale = w_vals.iter().fold(1f64, |a, v| a.max(v.abs()));
        if w_vals.first().copied().unwrap_or(0.0) < -tol.psd * w_scale {
            return Err(Error::Validation("fitness operator is not positive semidefinite".into()));
        }
        let wbar = target.trace() / source.trace();
        let w = QuantumObservable::from_hermitian_unchecked(w_mat);
        let u = QuantumObservable::from_hermitian_unchecked(w.matrix() * c(1.0 / wbar));
        Ok(Self { superop, source, target, d2, fitness: QuantumFitness { w, wbar, u } })
    }

    /// Builds a process whose child state is the image of the source.
    pub fn from_superoperator(superop: CMatrix, source: DensityOperator, d2: usize) -> Result<Self> {
        if superop.ncols() != source.dim() * source.dim() || superop.nrows() != d2 * d2 {
            return Err(Error::Shape("superoperator does not match the dimensions".into()));
        }
        let target = DensityOperator::new(apply_superop(&superop, source.matrix(), d2))?;
        Self::new(superop, source, target)
    }

    /// Builds the process `ρ ↦ Σ K ρ K†` from Kraus operators `K` of shape `d′ × d`.
    pub fn from_kraus(kraus: &[CMatrix], source: DensityOperator) -> Result<Self> {
        Self::from_superoperator(kraus_superoperator(kraus, source.dim())?, source, kraus[0].nrows())
    }

    /// Diagonal embedding of a classical process: `ρ ↦ Σ_{ij} w_ij ρ_ii |j⟩⟨j|`.
    pub fn embed(p: &Process) -> Self {
        let d = p.source().len();
        let d2 = p.target().len();
        let mut superop = CMatrix::zeros(d2 * d2, d * d);
        for (i, row) in p.kernel().iter().enumerate() {
            for (j, &wij) in row.iter().enumerate() {
                superop[(j + d2 * j, i + d * i)] = c(wij);
            }
        }
        let source = DensityOperator::new(diagonal(p.source().weights())).expect("classical weights are a valid state");
        let target = DensityOperator::new(diagonal(p.target().weights())).expect("classical weights are a valid state");
        Self::new(superop, source, target).expect("classical processes embed as positive maps")
    }

    /// `𝒲(ρ)`.
    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        apply_superop(&self.superop, rho, self.d2)
    }

    /// `𝒲†(Y)`, defined by `Tr(𝒲†(Y) μ) = Tr′(Y 𝒲(μ))`.
    pub fn apply_adjoint(&self, y: &CMatrix) -> CMatrix {
        unvec(&(self.superop.adjoint() * vec_of(y)), self.source.dim())
    }

    /// The superoperator.
    pub fn superoperator(&self) -> &CMatrix {
        &self.superop
    }

    /// Parent state μ.
    pub fn source(&self) -> &DensityOperator {
        &self.source
    }

    /// Child state μ′.
    pub fn target(&self) -> &DensityOperator {
        &self.target
    }

    /// Fitness data.
    pub fn fitness(&self) -> &QuantumFitness {
        &self.fitness
    }

    /// Relative fitness operator `U`.
    pub fn u(&self) -> &QuantumObservable {
        &self.fitness.u
    }

    /// Fitness operator `W`.
    pub fn w(&self) -> &QuantumObservable {
        &self.fitness.w
    }

    /// `W̄`.
    pub fn wbar(&self) -> f64 {
        self.fitness.wbar
    }
}

/// Superoperator of the Kraus map `ρ ↦ Σ K ρ K†`, `Σ conj(K) ⊗ K`.
pub fn kraus_superoperator(kraus: &[CMatrix], d: usize) -> Result<CMatrix> {
    let first = kraus.first().ok_or_else(|| Error::Invalid("empty Kraus family".into()))?;
    let d2 = first.nrows();
    let mut s = CMatrix::zeros(d2 * d2, d * d);
    for k in kraus {
        if k.nrows() != d2 || k.ncols() != d {
            return Err(Error::Shape(format!("Kraus operator is {}×{}, expected {d2}×{d}", k.nrows(), k.ncols())));
        }
        s += k.conjugate().kronecker(k);
    }
    Ok(s)
}

/// Superoperator of the adjoint map in the trace pairing (the conjugate
/// transpose of the superoperator).
pub fn adjoint(p: &QuantumProcess) -> CMatrix {
    p.superop.adjoint()
}

/// Largest `|Tr(𝒲†(Y) μ) − Tr′(Y 𝒲(μ))|` over the given probe pairs.
pub fn adjoint_duality_residual(p: &QuantumProcess, probes: &[(CMatrix, CMatrix)]) -> f64 {
    probes
        .iter()
        .map(|(y, mu)| ((p.apply_adjoint(y) * mu).trace() - (y * p.apply(mu)).trace()).norm())
        .fold(0.0, f64::max)
}

/// Fitness operator, selective coefficient and relative fitness operator.
pub fn q_fitness(p: &QuantumProcess) -> QuantumFitness {
    p.fitness.clone()
}

/// `p` followed by `q`; the child state of `p` must be the parent state of `q`.
pub fn q_compose(p: &QuantumProcess, q: &QuantumProcess) -> Result<QuantumProcess> {
    let tol = tolerance::current();
    let (a, b) = (p.target.matrix(), q.source.matrix());
    if a.nrows() != b.nrows() {
        return Err(Error::NotComposable("dimension mismatch".into()));
    }
    let scale = max_abs(a).max(max_abs(b)).max(1.0);
    if max_abs(&(a - b)) > tol.rel * scale {
        return Err(Error::NotComposable("child state of the first process is not the parent state of the second".into()));
    }
    QuantumProcess::new(&q.superop * &p.superop, p.source.clone(), q.target.clone())
}
