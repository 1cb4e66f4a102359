use std::io;

use thiserror::Error;

/// Errors raised while loading corpora or evaluating runs.
#[derive(Debug, Error)]
pub enum Error {
    /// A line or element of an input file could not be parsed.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Parsed data violates a structural invariant (duplicate ranks, conflicting grades, ...).
    #[error("validation error: {0}")]
    Validation(String),

    /// The requested configuration cannot be honoured.
    #[error("configuration error: {0}")]
    Config(String),

    /// A metric was called outside of its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A result set does not cover the full system x query grid.
    #[error("integrity error: {0}")]
    Integrity(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// Whether this error came from the underlying reader or writer.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io(_))
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        match err.into_kind() {
            csv::ErrorKind::Io(e) => Error::Io(e),
            other => Error::Io(io::Error::other(format!("{other:?}"))),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
