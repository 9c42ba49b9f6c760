//! Evolutionary processes on finite type spaces.
//!
//! A [`Process`] is a non-negative kernel `w[i][i′] = w_i({i′})` carrying a
//! parent population μ onto a child population μ′ through the disintegration
//! equation `μ′_{i′} = Σ_i w[i][i′] μ_i`. From it follow the fitness data
//! (`W`, `W̄ = N′/N`, `U = W/W̄`), local averages `⟨y⟩_w`, local changes,
//! composition of successive processes and the factorization of a process
//! into a purely selective and a purely environmental part.

mod factorize;
mod process;

pub use factorize::{classify_purity, price_factorize, Factorization, Purity};
pub use process::{compose, validate, Diagnostics, FitnessData, Process};
