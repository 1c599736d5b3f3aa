use thiserror::Error;

/// Errors produced by oracles, constraint systems, and search drivers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("element {element} out of range for ground set of size {n}")]
    ElementOutOfRange { element: usize, n: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("infeasible input: {0}")]
    InfeasibleInput(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("invalid data: {0}")]
    InvalidData(String),
}

pub type Result<T> = std::result::Result<T, Error>;
