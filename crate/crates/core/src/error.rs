use crate::ring::Ring;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("operands live in different rings ({0} and {1})")]
    MixedRings(Ring, Ring),

    #[error("modulus {0} is not prime")]
    NotPrime(u64),

    #[error("invalid scalar {text:?} for ring {ring}: {reason}")]
    InvalidScalar {
        text: String,
        ring: Ring,
        reason: String,
    },

    #[error("invalid ring {0:?} (expected q, z or zmod:<p>)")]
    InvalidRing(String),

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("composition index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("an element of degree 0 has no input to compose into")]
    NoValidPosition,

    #[error("result would have negative degree {0}")]
    NegativeDegree(i64),

    #[error("multiplication must have degree 2, found degree {0}")]
    NotBinary(usize),

    #[error("point ({i}, {j}) is outside the scope for degrees h = {h_deg}, f = {f_deg}")]
    OutsideScope {
        h_deg: usize,
        f_deg: usize,
        i: usize,
        j: usize,
    },

    #[error("auxiliary index {index} outside {min}..={max}")]
    AuxIndexOutOfRange { index: usize, min: usize, max: usize },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("unsupported module rank {0} (must be 1..=8)")]
    InvalidDimension(usize),

    #[error("expected {expected} coefficients, found {found}")]
    CoefficientCount { expected: usize, found: usize },

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),

    #[error("invalid generator {name:?}: {reason}")]
    InvalidGenerator { name: String, reason: String },

    #[error("multiplication is not associative")]
    NotAssociative,

    #[error("malformed input: {0}")]
    Format(String),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Format(err.to_string())
    }
}
