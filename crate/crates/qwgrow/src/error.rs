use std::fmt;
use std::path::PathBuf;

/// Location-tagged parse failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based line.
    pub line: usize,
    /// 1-based column; 0 when not meaningful.
    pub column: usize,
    /// What went wrong.
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError { line, column, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.column > 0 {
            write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for ParseError {}

/// Errors of the IO and experiment layer.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Failure in the core library.
    #[error(transparent)]
    Core(#[from] qwgrow_core::Error),
    /// Malformed input text.
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    /// Filesystem failure on a specific path.
    #[error("{path}: {source}")]
    Io {
        /// Path involved.
        path: PathBuf,
        /// Underlying error.
        source: std::io::Error,
    },
    /// JSON (de)serialization failure.
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    /// Semantically invalid input that parsed fine.
    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}

/// Shorthand result type.
pub type Result<T> = std::result::Result<T, Error>;
