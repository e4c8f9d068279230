use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("expected {expected} domain, found {found}")]
    WrongDomain {
        expected: &'static str,
        found: &'static str,
    },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("unsupported exponent: {0}")]
    UnsupportedExponent(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("band violation: {0}")]
    BandViolation(String),

    #[error("covering alpha {covering} does not match requested alpha {requested}")]
    AlphaMismatch { covering: f64, requested: f64 },

    #[error("covering construction failed: {0}")]
    Construction(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
