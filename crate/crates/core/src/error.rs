use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("point coordinate {value} on axis {axis} lies outside [0, 1]")]
    OutOfDomain { axis: usize, value: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("class label {label} outside 1..={classes}")]
    InvalidClass { label: usize, classes: usize },

    #[error("task mismatch: {0}")]
    TaskMismatch(String),

    #[error("enumeration too large: {size} exceeds limit {limit}")]
    EnumerationTooLarge { size: u128, limit: u128 },

    #[error("mechanism output space is not enumerable")]
    NotEnumerable,

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("trial N={n} eps={eps} trial={trial}: {source}")]
    Trial {
        n: usize,
        eps: f64,
        trial: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
