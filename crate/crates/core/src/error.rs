use thiserror::Error;

use crate::word::Symbol;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("{0}")]
    Domain(String),

    #[error("symbol {0} is not in the alphabet")]
    ForeignSymbol(Symbol),

    /// The word is finite and shorter than the requested prefix.
    #[error("prefix of length {requested} unavailable: word ends after {available} symbols")]
    PrefixUnavailable { requested: usize, available: usize },

    /// A size guard refused the computation.
    #[error("{what}: {value} exceeds the limit of {limit}")]
    GuardExceeded {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("not found: {0}")]
    NotFound(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
