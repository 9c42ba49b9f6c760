//! Inequalities of natural selection, evaluated as [`LawReport`]s.
//!
//! Each report carries a chain of values ordered from largest to smallest,
//! the position of the left-hand side within that chain, the slack of every
//! link (`values[k] − values[k+1]`, non-negative when the inequality holds),
//! saturation flags, the equilibrium class of the process and auxiliary
//! scalars. Nothing is asserted: a negative slack is reported, not hidden.
//!
//! The single-process laws depend on the process only through the
//! distribution of its relative fitness `U` under `μ/N`; they are exposed on
//! [`Distribution`] so that the quantum crate can reuse them on spectral
//! distributions.

mod distribution;
mod report;
mod single;
mod stationarity;
mod two_process;

pub use distribution::Distribution;
pub use report::{EquilibriumClass, LawReport};
pub use single::{
    exp_first_law, first_law, higher_order_first_law, second_law, selective_acceleration,
    selective_entropy_bounds, speed_limits, zeroth_law, DEFAULT_C_GRID, MAX_ORDER,
};
pub use stationarity::{stationarity, StationarityClass};
pub use two_process::{ec_selective_entropy_bound, ec_variance_bound, multilevel_second_law};
