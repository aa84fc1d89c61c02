use thiserror::Error;

/// Errors raised by the library.
///
/// Property violations of the canonical labeling algorithm are *not* errors;
/// they are returned as values (see [`crate::canon::CanonicalResult`]).
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A search exceeded its configured budget. Never folded into a yes/no answer.
    #[error("undecided: {0}")]
    Undecided(String),

    #[error("inconsistent deck: {0}")]
    InconsistentDeck(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
