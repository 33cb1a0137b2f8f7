use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("the Cayley-Dickson parameter mu must be nonzero")]
    ZeroMu,
    #[error("invalid root: {0}")]
    InvalidRoot(String),
    #[error("element is not in M: {0}")]
    NotInM(String),
    #[error("element is not in S1 (r * ex(r) != 1): {0}")]
    NotInS1(String),
    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("inconsistent grading: {0}")]
    Inconsistency(String),
    #[error("grading completion stalled at dimension {dim} < 8")]
    CompletionFailure { dim: usize },
    #[error("constraint violation: {0}")]
    ConstraintViolation(String),
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("unclassifiable grading: {0}")]
    Unclassifiable(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
