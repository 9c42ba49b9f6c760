use measure_core::{kahan_sum, tolerance, xlogx, Error, Result};
use process_core::Process;

/// A finite distribution of relative-fitness values: atoms `u_k ≥ 0` with
/// probabilities `q_k` summing to one and mean (approximately) one.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    u: Vec<f64>,
    q: Vec<f64>,
    wbar: f64,
}

impl Distribution {
    /// Validates non-negativity and normalisation.
    pub fn new(u: Vec<f64>, q: Vec<f64>) -> Result<Self> {
        if u.len() != q.len() || u.is_empty() {
            return Err(Error::Shape(format!("{} values for {} probabilities", u.len(), q.len())));
        }
        let tol = tolerance::current();
        if let Some(v) = u.iter().chain(&q).find(|v| !v.is_finite() || **v < -tol.zero) {
            return Err(Error::Negative(format!("distribution entry {v}")));
        }
        let total = kahan_sum(q.iter().copied());
        if (total - 1.0).abs() > tol.rel.max(1e-12) * 10.0 {
            return Err(Error::Invalid(format!("probabilities sum to {total}")));
        }
        Ok(Self {
            u: u.into_iter().map(|v| v.max(0.0)).collect(),
            q: q.into_iter().map(|v| v.max(0.0)).collect(),
            wbar: 1.0,
        })
    }

    /// Relative fitness of `p` under `μ/N`.
    pub fn of(p: &Process) -> Self {
        Self { u: p.u().to_vec(), q: p.source().probabilities(), wbar: p.wbar() }
    }

    /// Sets the selective coefficient `W̄` used by aggregate quantities (default 1).
    pub fn with_wbar(mut self, wbar: f64) -> Self {
        self.wbar = wbar;
        self
    }

    /// Selective coefficient `W̄`.
    pub fn wbar(&self) -> f64 {
        self.wbar
    }

    /// Atoms `u_k`.
    pub fn values(&self) -> &[f64] {
        &self.u
    }

    /// Probabilities `q_k`.
    pub fn probs(&self) -> &[f64] {
        &self.q
    }

    /// `𝔼[f(U)]`.
    pub fn mean(&self, f: impl Fn(f64) -> f64) -> f64 {
        kahan_sum(self.u.iter().zip(&self.q).map(|(&u, &q)| if q == 0.0 { 0.0 } else { q * f(u) }))
    }

    /// `cov(f(U), U)`, computed with centred factors.
    pub fn cov_with_u(&self, f: impl Fn(f64) -> f64) -> f64 {
        let fm = self.mean(&f);
        let um = self.mean(|u| u);
        self.mean(|u| (f(u) - fm) * (u - um))
    }

    /// `var(U)`.
    pub fn var(&self) -> f64 {
        let m = self.mean(|u| u);
        self.mean(|u| (u - m) * (u - m)).max(0.0)
    }

    /// `p_* = P(U > 0)` after zero snapping.
    pub fn p_star(&self) -> f64 {
        let tol = tolerance::current();
        kahan_sum(self.u.iter().zip(&self.q).filter(|(u, _)| tol.snap(**u) > 0.0).map(|(_, q)| *q))
    }

    /// Selective entropy `S_NS = 𝔼[−U log U]`.
    pub fn selective_entropy(&self) -> f64 {
        self.mean(|u| -xlogx(u))
    }

    /// `𝔼[Uⁿ]` for real `n > 0`.
    pub fn moment(&self, n: f64) -> f64 {
        self.mean(|u| if u > 0.0 { u.powf(n) } else { 0.0 })
    }
}

impl From<&Process> for Distribution {
    fn from(p: &Process) -> Self {
        Self::of(p)
    }
}

impl From<&Distribution> for Distribution {
    fn from(d: &Distribution) -> Self {
        d.clone()
    }
}

impl Distribution {
    /// `var(f(U))`.
    pub fn var_of(&self, f: impl Fn(f64) -> f64) -> f64 {
        let m = self.mean(&f);
        self.mean(|u| (f(u) - m).powi(2)).max(0.0)
    }
}
