use thiserror::Error;

/// Errors produced by the qudit bound machinery.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension {0}: qudit dimension must be at least 2")]
    InvalidDimension(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("operation is not supported for dimension {0}")]
    UnsupportedDimension(usize),

    #[error("at least one observable is required")]
    EmptyObservables,

    #[error("not a density matrix: {0}")]
    InvalidState(String),

    #[error("vector is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("argument out of domain: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
