//! Numerical tolerances.
//!
//! The relative tolerance can be overridden for a whole run through the
//! `PRICEKIT_TOLERANCE` environment variable.

use std::sync::OnceLock;

/// Name of the environment variable overriding [`Tolerances::rel`].
pub const ENV_VAR: &str = "PRICEKIT_TOLERANCE";

/// Tolerances used across the workspace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Absolute snapping threshold: |v| ≤ `zero` is treated as exactly 0.
    pub zero: f64,
    /// Relative tolerance for identities (disintegration, Price residuals).
    pub rel: f64,
    /// Absolute tolerance on a slack for declaring an inequality saturated.
    pub sat: f64,
    /// Absolute Hermiticity residual allowed for quantum operators.
    pub herm: f64,
    /// Smallest eigenvalue allowed (as `-psd`) before clipping a density operator.
    pub psd: f64,
    /// Relative eigenvalue cutoff (times the spectral norm) defining operator support.
    pub supp: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { zero: 1e-12, rel: 1e-9, sat: 1e-9, herm: 1e-10, psd: 1e-10, supp: 1e-10 }
    }
}

impl Tolerances {
    /// Defaults, with `rel` replaced by `PRICEKIT_TOLERANCE` when it parses as
    /// a positive finite number.
    pub fn from_env() -> Self {
        let mut tol = Self::default();
        if let Some(rel) = std::env::var(ENV_VAR)
            .ok()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .filter(|v| v.is_finite() && *v > 0.0)
        {
            tol.rel = rel;
        }
        tol
    }

    /// `|v| ≤ zero`.
    #[inline]
    pub fn is_zero(&self, v: f64) -> bool {
        v.abs() <= self.zero
    }

    /// `v` snapped to 0 when within `zero`.
    #[inline]
    pub fn snap(&self, v: f64) -> f64 {
        if self.is_zero(v) {
            0.0
        } else {
            v
        }
    }

    /// `|a − b| ≤ rel · max(1, |a|, |b|)`.
    #[inline]
    pub fn close(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.rel * 1f64.max(a.abs()).max(b.abs())
    }
}

static CURRENT: OnceLock<Tolerances> = OnceLock::new();

/// Process-wide tolerances (environment read once, on first use).
pub fn current() -> &'static Tolerances {
    CURRENT.get_or_init(Tolerances::from_env)
}
