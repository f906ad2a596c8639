use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid graph: {0}")]
    Validation(String),

    #[error("instance size {nodes} exceeds the exhaustive-search limit of {limit}")]
    LimitExceeded { nodes: usize, limit: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("virtual queue vector has zero norm")]
    ZeroNorm,

    #[error("rate {lambda} is not below the broadcast capacity {capacity}")]
    RateInfeasible { lambda: f64, capacity: f64 },

    #[error("invalid simulation config: {0}")]
    Config(String),

    #[error("invalid weights: {0}")]
    Weights(String),

    #[error("invalid instance: {0}")]
    Instance(String),

    #[error("simulation invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
