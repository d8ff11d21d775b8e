use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("reservoir window capacity exhausted: {attached} systems attached, capacity {capacity}")]
    CapacityExhausted { attached: usize, capacity: usize },

    #[error("matrix is not unitary (worst Gram deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("matrix is not a valid density matrix: {0}")]
    InvalidDensity(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("density matrix carries no total-number labels")]
    MissingLabels,

    #[error("outside validity domain: {0}")]
    Domain(String),

    #[error("invariant violated: {0}")]
    InvariantViolated(String),
}

pub type Result<T> = std::result::Result<T, Error>;
