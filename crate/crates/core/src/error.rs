use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("degree mismatch: {0}")]
    Degree(String),

    #[error("pole: coordinate {coord} vanishes where a negative power is required")]
    Pole { coord: usize },

    #[error("ambient dimension {0} is not of the form 2n+1 with n >= 1")]
    EvenDimension(usize),

    #[error("substitution needs the inverse of a non-monomial Laurent polynomial (component {0})")]
    NonMonomialInverse(usize),

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("slice of the relation is empty at {0}")]
    EmptySlice(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("rank-deficient least-squares system: rank {rank} < {cols}")]
    RankDeficient { rank: usize, cols: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(format!("line {}, column {}: {}", e.line(), e.column(), e))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
