//! Finite-dimensional quantum Price machinery.
//!
//! Populations become density operators `μ`, evolutionary processes become
//! positive linear maps `𝒲` on density matrices, and observables become
//! Hermitian operators. The fitness operator is `W = 𝒲†(Id′)`, the pull-back
//! of the child identity, with relative fitness `U = W/W̄`. Because `X` and
//! `U` need not commute, the Price equation splits into a left and a right
//! version whose selective terms differ by `𝔼_μ[[X, U]]`.
//!
//! Covariances are ordered as `cov(X₀, X₁) = 𝔼[X₀X₁] − 𝔼[X₀]𝔼[X₁]` with
//! `𝔼_μ[A] = Tr(Aμ)/N`. Inverses of `W` are Moore–Penrose pseudoinverses
//! restricted to its support.

mod laws;
mod linalg;
mod open;
mod operators;
mod partition;
mod price;
mod process;

pub use crate::laws::{q_laws, spectral_distribution, QuantumLaws};
pub use linalg::{
    apply_fn, eigh, from_spectrum, hermiticity_residual, hermitize, max_abs, spectral_norm, support_pinv,
    support_projection, CMatrix,
};
pub use open::{q_kgs, OpenQuantumProcess, QuantumKgs};
pub use operators::{q_covariance, q_expectation, q_mean, DensityOperator, QuantumObservable};
pub use partition::{q_partition_entropy, QuantumPartitionEntropy};
pub use price::{local_averages, q_factorize, q_price, QuantumFactorization, QuantumPriceDecomposition};
pub use process::{
    adjoint, adjoint_duality_residual, kraus_superoperator, q_compose, q_fitness, QuantumFitness, QuantumProcess,
    POSITIVITY_PROBES,
};
