//! Selective and environmental entropies of evolutionary processes.
//!
//! Selective entropy `S_NS = 𝔼[−U log U]` measures how strongly a process
//! selects. Environmental entropy is computed on a joint partition
//! `(𝒜, ℬ)` of parents and children: each cell `(A, B)` carries the cell
//! fitness `U_{A,B}(i) = 1_A(i)·w_i(B)/W̄`, its mean `Ū_{A,B}`, the
//! dispersion ratio `D_{A,B} = U_{A,B}/U` and the mixing ratio
//! `M_{A,B} = D_{A,B}/Ū_{A,B}`, from which
//!
//! ```text
//! S_EC = Σ −Ū log Ū = S_dis + S_mix,   S_dis = Σ 𝔼[−U_{A,B} log D],   S_mix = Σ 𝔼[U_{A,B} log M].
//! ```
//!
//! For discrete processes the singleton partitions are generating, so
//! [`generating_profile`] realises the environmental entropy of the process.

mod intergenerational;
mod ks;
mod partition;
mod profile;
mod reversibility;

pub use intergenerational::{intergenerational_ec_change, IntergenerationalChange};
pub use ks::{ks_entropy, ks_entropy_enumerated, ks_entropy_transfer, MAX_HORIZON};
pub use partition::Partition;
pub use profile::{
    dispersion_mixing_bounds, dispersion_mixing_from_profile, environmental_equilibrium,
    environmental_profile, generating_profile, local_selective_entropy, selective_entropy,
    third_law, third_law_from_profile, total_entropy, CellEntropy, EntropyProfile,
    EquilibriumCheck, ThirdLaw,
};
pub use reversibility::{reversibility, ReversibilityVerdict};
