use thiserror::Error;

/// Errors surfaced by the library.
///
/// Variants map onto the CLI exit codes: input problems are user errors,
/// `Internal` signals a violated invariant (a bug).
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime in [2, 997]")]
    InvalidPrime(u32),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("invalid module: {0}")]
    InvalidModule(String),

    #[error("invalid module map: {0}")]
    InvalidMap(String),

    #[error("unknown algebra name `{0}`")]
    UnknownAlgebra(String),

    #[error("unknown catalog label `{0}`")]
    UnknownLabel(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown summand of dimension {dim}: {serialized}")]
    UnknownSummand { dim: usize, serialized: String },

    #[error("search limit exceeded: {0}")]
    SearchLimit(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by malformed or inconsistent input.
    pub fn is_user_error(&self) -> bool {
        !matches!(self, Error::Internal(_) | Error::SearchLimit(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
