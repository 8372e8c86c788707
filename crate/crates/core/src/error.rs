use thiserror::Error;

/// Errors raised by matrix construction, factorization and bound evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:e}, tolerance {tol:e})")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("matrix is not positive definite (pivot {index} = {pivot:e})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("dimension {dim} exceeds the cofactor oracle limit of {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("block grid mismatch: {left} vs {right}")]
    BlockGridMismatch { left: usize, right: usize },

    #[error("factor list is empty")]
    EmptyFactorList,

    #[error("blocks must be square, got {p}x{q}")]
    NonSquareBlocks { p: usize, q: usize },

    #[error("block dimensions must be equal, got {p} and {q}")]
    UnequalBlockDims { p: usize, q: usize },

    #[error("diagonal entry {index} is negative ({value:e}); input is not positive semidefinite")]
    NegativeDiagonal { index: usize, value: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("unknown bound name `{0}`")]
    UnknownBound(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
