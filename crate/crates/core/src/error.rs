use thiserror::Error;

/// Everything that can go wrong while building or combining finite structures.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown element label `{0}`")]
    UnknownLabel(String),

    #[error("carrier of {size} elements exceeds the limit of {limit}")]
    CarrierTooLarge { size: usize, limit: usize },

    #[error("order is not reflexive: missing pair ({0}, {0})")]
    NotReflexive(String),

    #[error("order is not transitive: ({a}, {b}) and ({b}, {c}) present but ({a}, {c}) missing")]
    NotTransitive { a: String, b: String, c: String },

    #[error("map table has {got} entries, source carrier has {expected}")]
    TableLength { expected: usize, got: usize },

    #[error("map sends `{0}` outside the target carrier")]
    OutOfRange(String),

    #[error("map is not monotone: `{lo}` <= `{hi}` but images are not comparable")]
    NotMonotone { lo: String, hi: String },

    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),

    #[error("objects mix set-like and preorder-like carriers")]
    FlavourMismatch,

    #[error("morphism is not admissible (not in M): {0}")]
    NotAdmissible(String),

    #[error("object `{0}` is not the coproduct this operation expects")]
    NotACoproduct(String),

    #[error("morphism is not continuous: {0}")]
    NotContinuous(String),

    #[error("not a join-semilattice with zero: {0}")]
    NotASemilattice(String),

    #[error("semilattice map is not a homomorphism: {0}")]
    NotAHomomorphism(String),

    #[error("biproduct equations do not hold: {0}")]
    UnverifiedBiproduct(String),

    #[error("unknown context `{0}` (expected finset or finpre)")]
    UnknownContext(String),

    #[error("unknown closure family `{0}` (expected alexandrov, identity or indiscrete)")]
    UnknownFamily(String),

    #[error("unknown theorem id `{0}`")]
    UnknownTheorem(String),

    #[error("bound {0} is outside the supported range 1..={max}", max = crate::MAX_BOUND)]
    BoundOutOfRange(usize),

    #[error("{0}")]
    Description(String),
}

pub type Result<T> = std::result::Result<T, Error>;
