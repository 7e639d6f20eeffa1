//! Subshifts of Baire space.
//!
//! Symbolic dynamics over the countable alphabet `ω`: forbidden-word bases of
//! finite and bounded type, pseudo-orbits and their shadows, chain
//! transitivity, and finite-horizon omega-limit sets together with the
//! constructions that realize a prescribed set as an omega-limit set.
//!
//! Every construction returns a point that can be re-checked: eventually
//! periodic points compare exactly, generator schemes are checked to a stated
//! horizon.

pub mod error;
pub mod metric;
pub mod omega;
pub mod point;
pub mod shadowing;
pub mod subshift;
pub mod transitivity;
pub mod word;

pub use error::{Error, Result};
pub use metric::{DyadicDistance, Distance, Lcp};
pub use point::{IndexMap, Point, PointStream, Scheme};
pub use subshift::{Direction, ForbiddenBasis, Rule, Subshift, SubshiftSpec, Verdict};
pub use word::{Symbol, Word};
pub use omega::{attracting_check, factor_set, omega_equals, omega_prefixes, sequence_omega_prefixes, z_prefixes, Ladder, OmegaApprox};
pub use shadowing::{
    back_extend, expansivity_witness, shadowing_modulus, synthesize_asymptotic_shadow, synthesize_shadow,
    verify_asymptotic_shadow, verify_pseudo_orbit, verify_shadow, AsymptoticPseudoOrbit, AsymptoticShadow, Expansivity,
    PseudoOrbit, Rate, Violation,
};
pub use transitivity::{
    certify_ict, check_closed_invariant, find_delta_chain, find_delta_chain_min_steps, ict_to_apo, is_ict,
    realize_ict, realize_invariant_sft, sft_connecting_chain, stable_exponent, DeltaChain, SetPresentation, SetSpec,
};
