use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("word {0:?} has no composition form (must begin with e1)")]
    NoComposition(String),
    #[error("invalid word text {0:?}: expected characters '0' and '1'")]
    ParseWord(String),
    #[error("invalid composition text {0:?}")]
    ParseComposition(String),
    #[error("composition {0} is not convergent (last part must be >= 2)")]
    Divergent(String),
    #[error("truncation order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("series has non-unit constant coefficient")]
    NonUnit,
    #[error("weight {weight} exceeds truncation order {order}")]
    WeightExceedsOrder { weight: usize, order: usize },
    #[error("precision target {target:e} not met for {what}: best bound {achieved:e}")]
    Precision {
        what: String,
        target: f64,
        achieved: f64,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("cache file {path}: line {line}: {reason}")]
    CacheFormat {
        path: String,
        line: usize,
        reason: String,
    },
    #[error("io error: {0}")]
    Io(String),
    #[error("depth mismatch: expected {expected}, found {found}")]
    DepthMismatch { expected: usize, found: usize },
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
