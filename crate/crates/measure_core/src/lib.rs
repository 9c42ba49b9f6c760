//! Finite discrete measures and the population statistics built on them.
//!
//! A [`Population`] is a non-negative weight vector over a labelled
//! [`TypeSet`]; an [`Observable`] is a real value per type. Averages are taken
//! under the normalised measure μ/N, covariances are population covariances,
//! and the childbearing restriction keeps the types on which a fitness
//! observable is strictly positive.
//!
//! Conventions shared by every crate in the workspace live here as well:
//! natural logarithms, `0·log 0 = 0` ([`xlogx`]) and the numerical
//! [`Tolerances`].

mod error;
mod num;
mod stats;
pub mod tolerance;
mod types;

pub use error::{Error, Result};
pub use num::{kahan_sum, log_or_zero, xlogx, xlogy};
pub use stats::{
    childbearing_stats, covariance, expectation, expectation_weighted, variance, ChildbearingStats,
};
pub use tolerance::Tolerances;
pub use types::{Observable, Population, TypeSet};
