use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("empty input to {0}")]
    Empty(&'static str),
    #[error("{0} requires positive integers")]
    NonPositive(&'static str),
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("invalid cone: {0}")]
    InvalidCone(String),
    #[error("group elements live on different ambient cones {0} and {1}")]
    AmbientMismatch(String, String),
    #[error("carriers {0} and {1} do not span a cone")]
    NotACone(String, String),
    #[error("unknown sector key {key:?}")]
    UnknownSector { key: String, valid: Vec<String> },
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
