use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("eigensolver did not converge (worst residual {worst_residual:e})")]
    Convergence { worst_residual: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("unsupported case: {0}")]
    Unsupported(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("cannot resolve state: {0}")]
    Resolve(String),

    #[error("cache {path}: {message}")]
    Cache { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Short category tag used for CLI exit messages.
    pub fn category(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "parameter",
            Error::InvalidArgument(_) => "argument",
            Error::Convergence { .. } => "convergence",
            Error::InsufficientData(_) => "data",
            Error::Unsupported(_) => "unsupported",
            Error::Parse { .. } => "parse",
            Error::Resolve(_) => "resolve",
            Error::Cache { .. } => "cache",
            Error::Io(_) => "io",
        }
    }
}
