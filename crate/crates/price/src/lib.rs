//! Change operators and Price-equation identities.
//!
//! For a process `w : μ → μ′` with relative fitness `U`, an observable `x` on
//! the parents and `y` on the children, the total change of the average
//! splits as
//!
//! ```text
//! Δ(x̄, ȳ) = 𝔼′[y] − 𝔼[x] = cov(x, U) + 𝔼[Δ_w(x, y)·U]
//!            └── ∂_NS ──┘   └──── ∂_EC ────┘
//! ```
//!
//! Every decomposition returned here carries its residual so callers can see
//! how closely floating point honours the identity.

mod multilevel;

use measure_core::{covariance, expectation, kahan_sum, variance, Observable, Result};
use process_core::{compose, Process};
use serde::{Deserialize, Serialize};

pub use multilevel::{multilevel_price, multilevel_variance, MultilevelPrice, MultilevelVariance};

/// `Δ = ∂_NS + ∂_EC`, with the floating-point residual.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriceDecomposition {
    /// Total change `𝔼′[y] − 𝔼[x]`.
    pub delta: f64,
    /// Selective change `cov(x, U)`.
    pub ns: f64,
    /// Environmental change `𝔼[Δ_w(x, y)·U]`.
    pub ec: f64,
    /// `delta − ns − ec`.
    pub residual: f64,
}

impl PriceDecomposition {
    /// Builds the record and its residual.
    pub fn new(delta: f64, ns: f64, ec: f64) -> Self {
        Self { delta, ns, ec, residual: delta - ns - ec }
    }

    /// The scale `max(|delta|, |ns|, |ec|, 1)` against which the residual is judged.
    pub fn scale(&self) -> f64 {
        self.delta.abs().max(self.ns.abs()).max(self.ec.abs()).max(1.0)
    }

    /// Whether `|residual| ≤ rel · scale`.
    pub fn holds(&self, rel: f64) -> bool {
        self.residual.abs() <= rel * self.scale()
    }
}

/// Price decomposition of the change from `x` (on the parents) to `y` (on the children).
pub fn price(p: &Process, x: &Observable, y: &Observable) -> Result<PriceDecomposition> {
    x.check_on(p.source())?;
    y.check_on(p.target())?;
    let delta = expectation(p.target(), y)? - expectation(p.source(), x)?;
    let ns = covariance(p.source(), x, &p.fitness().u)?;
    let change = p.local_change(x, y)?;
    let ec = expectation(p.source(), &change.mul(&p.fitness().u)?)?;
    Ok(PriceDecomposition::new(delta, ns, ec))
}

/// Selective change through the alternative route `𝔼[x(U − 1)]`.
pub fn selective_change_alt(p: &Process, x: &Observable) -> Result<f64> {
    x.check_on(p.source())?;
    let centred = p.fitness().u.map(|u| u - 1.0);
    expectation(p.source(), &x.mul(&centred)?)
}

/// Price decomposition of pre-evaluated functionals `f(x)` and `g(y)`.
///
/// The caller evaluates the functions pointwise; the machinery is that of
/// [`price`].
pub fn functional_price(p: &Process, f_of_x: &Observable, g_of_y: &Observable) -> Result<PriceDecomposition> {
    price(p, f_of_x, g_of_y)
}

/// The aggregate (unnormalised) form of the Price equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AggregatePrice {
    /// `N·cov(x, W)`.
    pub selection: f64,
    /// `N·𝔼[Δ_w(x, y)·W]`.
    pub transmission: f64,
    /// `(N′ − N)·𝔼[x]`.
    pub growth: f64,
    /// `μ′[y] − μ[x]`.
    pub total: f64,
    /// The two-term route `μ[x(W − 1)] + μ[Δ_w(x, y)·W]`.
    pub two_term: f64,
    /// `total − selection − transmission − growth`.
    pub residual: f64,
}

/// Aggregate Price equation `μ′[y] − μ[x] = N cov(x,W) + N 𝔼[Δ_w W] + (N′−N) 𝔼[x]`.
pub fn aggregate_price(p: &Process, x: &Observable, y: &Observable) -> Result<AggregatePrice> {
    x.check_on(p.source())?;
    y.check_on(p.target())?;
    let n = p.source().size();
    let n2 = p.target().size();
    let w = &p.fitness().w;
    let change = p.local_change(x, y)?;
    let selection = n * covariance(p.source(), x, w)?;
    let transmission = n * expectation(p.source(), &change.mul(w)?)?;
    let growth = (n2 - n) * expectation(p.source(), x)?;
    let total = kahan_sum(y.values().iter().zip(p.target().weights()).map(|(a, m)| a * m))
        - kahan_sum(x.values().iter().zip(p.source().weights()).map(|(a, m)| a * m));
    let two_term = kahan_sum(
        (0..x.values().len()).map(|i| {
            p.source().weights()[i] * (x.values()[i] * (w.values()[i] - 1.0) + change.values()[i] * w.values()[i])
        }),
    );
    Ok(AggregatePrice { selection, transmission, growth, total, two_term, residual: total - selection - transmission - growth })
}

/// Fisher's decomposition of the change in mean relative fitness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FisherDecomposition {
    /// `∂_NS(U) = var(U)`.
    pub ns: f64,
    /// `∂_EC(U, U′) = 𝔼[Δ_w(U, U′)·U]`.
    pub ec: f64,
    /// `ns + ec`, which vanishes since `Ū = Ū′ = 1`.
    pub residual: f64,
}

/// Generalized Fisher theorem for a composable pair: `var(U) + 𝔼[Δ_w(U,U′)U] = 0`.
pub fn fisher(p: &Process, q: &Process) -> Result<FisherDecomposition> {
    // Composability is the same precondition as for chaining the kernels.
    compose(p, q)?;
    let u = &p.fitness().u;
    let u2 = q.fitness().u.clone();
    let u2 = Observable::on(p.target(), u2.into_values())?;
    let ns = variance(p.source(), u)?;
    let change = p.local_change(u, &u2)?;
    let ec = expectation(p.source(), &change.mul(u)?)?;
    Ok(FisherDecomposition { ns, ec, residual: ns + ec })
}
