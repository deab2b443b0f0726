use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain where the formula is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid apparatus configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid synthesis parameters: {0}")]
    InvalidParams(String),

    #[error("trace too short: {len} samples, need at least {min}")]
    TraceTooShort { len: usize, min: usize },

    #[error("invalid trace: {0}")]
    InvalidTrace(String),

    #[error("R is undefined: power at wavenumber 1 is zero")]
    UndefinedR,

    #[error("degenerate session: R values have zero spread")]
    DegenerateSession,

    #[error("empty peak search range: k_min = {k_min}, last bin = {last}")]
    EmptySearchRange { k_min: usize, last: usize },

    #[error("index {index} out of range for trace of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("feature extraction failed: {0}")]
    FeatureExtraction(String),

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("{path}: {message}")]
    File { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
