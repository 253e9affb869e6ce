use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the filters, solvers and file readers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unsupported format: {0}")]
    Unsupported(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("linear program is unbounded")]
    Unbounded,

    #[error("simplex iteration limit ({0}) exceeded")]
    IterationLimit(usize),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by bad user input rather than by a failed computation.
    pub fn is_usage(&self) -> bool {
        !matches!(
            self,
            Error::Numerical(_) | Error::Unbounded | Error::IterationLimit(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
