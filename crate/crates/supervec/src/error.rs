//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid coordinate system: {0}")]
    BadCoordSystem(String),
    #[error("mismatched coordinate systems")]
    CoordMismatch,
    #[error("operand has inhomogeneous parity: {0}")]
    InhomogeneousParity(String),
    #[error("mode dimension mismatch: expected {expected}, got {got}")]
    ModeDim { expected: usize, got: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("algebra {0} is out of scope")]
    OutOfScope(String),
    #[error("unknown algebra name: {0}")]
    UnknownAlgebra(String),
    #[error("graded span is not closed: {0}")]
    NotClosed(String),
    #[error("verification failed: {0}")]
    CheckFailed(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
