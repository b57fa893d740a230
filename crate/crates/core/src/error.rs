use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("line {line}: {message}")]
    Line { line: usize, message: String },

    #[error("mode `{mode}` names missing category `{category}`")]
    OrphanMode { category: String, mode: String },

    #[error("duplicate name `{0}`")]
    DuplicateName(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("empty text after cleaning")]
    EmptyText,

    #[error("documents missing from gold set: {0:?}")]
    OrphanIds(Vec<String>),

    #[error(transparent)]
    Backend(#[from] BackendError),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

/// Failure reported by a pluggable scoring, QA, embedding, or annotation backend.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum BackendError {
    /// Transient failure; the caller may retry.
    #[error("backend unavailable: {0}")]
    Unavailable(String),
    /// The backend answered but the payload violated the protocol.
    #[error("protocol violation: {0}")]
    Protocol(String),
    #[error("backend error: {0}")]
    Other(String),
}

impl BackendError {
    pub fn is_retryable(&self) -> bool {
        matches!(self, BackendError::Unavailable(_))
    }
}

pub(crate) fn read_file(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}
