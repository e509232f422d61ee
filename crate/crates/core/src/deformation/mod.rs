//! Finite models of R = W(k)[[t]]/(p^n t, t²) and of its small extensions, the explicit
//! lift ρ_R, obstruction tests against every small extension, and brute-force counts of
//! the deformation functor on tiny rings.
//!
//! All rings are truncated at W-precision m. An obstruction found over C/p^m certifies
//! that no lift exists over C, since a lift over C would reduce to one over C/p^m. The
//! homomorphism property of ρ_R is validated at each configured m.

mod bruteforce;
mod lift;
mod test_ring;

pub use bruteforce::{brute_force_def_count, hom_count_r_to_a, DefCount, BRUTE_FORCE_LIMIT};
pub use lift::{
    alpha_matches_psi, construct_rho_r, extract_alpha, nu_embed, obstruction_cocycle, psi_apply, reduce_to_r,
    section, test_unliftability, AlphaDecomposition, LiftRecord, LiftVerdict,
};
pub use test_ring::{build_test_ring, enumerate_small_extensions, TestRing, TestRingKind, TrElem};

use thiserror::Error;

use crate::cohomology::CohomologyError;
use crate::ring::RingError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DeformationError {
    #[error("precision m = {m} is below the required {needed}")]
    PrecisionTooLow { m: u32, needed: u32 },
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error("not a homomorphism at ({0}, {1})")]
    HomomorphismFailure(u32, u32),
    #[error("the lifted image of element {0} does not reduce correctly or is not invertible")]
    NotALift(u32),
    #[error("ρ̂(g)ρ̂(h)ρ̂(gh)⁻¹ leaves 1 + z·Mat at ({0}, {1})")]
    KernelViolation(u32, u32),
    #[error("decomposition failed: {0}")]
    DecompositionFailure(String),
    #[error("enumeration of size {0} exceeds the limit")]
    TooLarge(u128),
}
