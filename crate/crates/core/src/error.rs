use thiserror::Error;

use crate::word::Word;

/// Errors raised by the library. Assertion failures of the verification
/// routines are reported through their return values, not through this type;
/// an `Error` means the request itself was malformed or a construction could
/// not be carried out.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("forbidden basis contains the empty word")]
    EmptyBasisWord,

    #[error("bounded rule must have max_len >= 1")]
    ZeroMaxLen,

    #[error("declared alphabet must be nonempty")]
    EmptyAlphabet,

    #[error("rule {name:?} needs max_len >= {needed}, got {got}")]
    RuleTooShort { name: String, needed: usize, got: usize },

    #[error("unknown rule {0:?}")]
    UnknownRule(String),

    #[error("eventually periodic point needs a nonempty period")]
    EmptyPeriod,

    #[error("expected an eventually periodic point, got a generator scheme")]
    NotEventuallyPeriodic,

    #[error("no fresh symbols available: {0}")]
    NoFreshSymbols(&'static str),

    #[error("middle word has length {len}, gluing needs at least {bound}")]
    GluingPrecondition { len: usize, bound: usize },

    #[error("distance bound must be positive")]
    ZeroDistance,

    #[error("horizon {horizon} is shorter than the basis length {needed}")]
    HorizonTooShort { horizon: usize, needed: usize },

    #[error("pseudo-orbit defect at index {index} is not below the claimed bound")]
    NotPseudoOrbit { index: usize },

    #[error("pseudo-orbit bound {delta} is too coarse: need at most 2^-{needed}")]
    DeltaTooCoarse { delta: String, needed: u32 },

    #[error("point {index} of the input is not in the subshift")]
    PointOutsideSubshift { index: usize },

    #[error("constructed point failed verification: {0}")]
    Construction(String),

    #[error("cannot extend backwards: no declared symbol precedes {prefix}")]
    BackExtension { prefix: Word },

    #[error("point is not a member of the presented set")]
    NotInSet,

    #[error("set is empty")]
    EmptySet,

    #[error("set is not internally chain transitive: no 2^-{exponent}-chain from entry {from} to entry {to}")]
    NotIct { exponent: u32, from: usize, to: usize },

    #[error("set is not shift invariant")]
    NotInvariant,

    #[error("operation needs a finite set of eventually periodic points")]
    NeedsFiniteSet,

    #[error("operation needs an explicit finite basis over the countable alphabet")]
    NeedsExplicitBasis,

    #[error("stream is not an asymptotic pseudo-orbit: {0}")]
    NotAsymptotic(String),

    #[error("window graph too large ({0} vertices)")]
    GraphTooLarge(usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
