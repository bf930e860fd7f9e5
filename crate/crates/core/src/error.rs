use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),

    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degree {degree} exceeds truncation {trunc}")]
    TruncationOverflow { degree: usize, trunc: usize },

    #[error("element is not in the image of P0^{iterations}")]
    NotInImage { iterations: usize },

    #[error("P0 is not injective in degree {degree}")]
    NotReduced { degree: usize },

    #[error("subspace is not closed under the action: P{k} escapes from degree {degree}")]
    NotClosed { k: usize, degree: usize },

    #[error("map is not A-linear: P{k} on degree {degree}")]
    NotLinear { k: usize, degree: usize },

    #[error("invariance violated: {0}")]
    Invariance(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("search bound exceeded: {0} items (limit {1})")]
    SearchBound(usize, usize),
}

pub type Result<T> = std::result::Result<T, Error>;
