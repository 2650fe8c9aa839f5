use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("argument error: {0}")]
    Argument(String),

    #[error("value {x} outside the range (0, {max}] of the modulus")]
    Range { x: f64, max: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("numeric error: {message} (achieved error {achieved:e})")]
    Numeric { message: String, achieved: f64 },

    #[error("ill-conditioned kernel system: condition {condition:e} exceeds {limit:e}; closest pair ({i}, {j})")]
    Conditioning {
        condition: f64,
        limit: f64,
        i: usize,
        j: usize,
    },

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn numeric(message: impl Into<String>, achieved: f64) -> Error {
    Error::Numeric {
        message: message.into(),
        achieved,
    }
}
