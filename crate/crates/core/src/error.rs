//! Error type shared by every module.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NonHermitianInput { deviation: f64 },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("eigensolver did not converge: {0}")]
    ConvergenceFailure(String),

    #[error("function undefined on the spectrum: {0}")]
    DomainError(String),

    #[error("singular matrix: {0}")]
    SingularMatrix(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid rank {rank} for dimension {dim}")]
    InvalidRank { rank: usize, dim: usize },

    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),

    #[error("function is not regular on the requested interval: {0}")]
    NotRegular(String),

    #[error("state is not faithful: {0}")]
    NonFaithful(String),

    #[error("invalid density operator: {0}")]
    InvalidDensity(String),

    #[error("lambda must be nonnegative, got {0}")]
    NegativeLambda(f64),

    #[error("invalid subalgebra: {0}")]
    InvalidSubalgebra(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("matrix A is not positive definite")]
    SingularA,

    #[error("divergence difference {0:e} is negative beyond tolerance")]
    NegativeDifference(f64),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
