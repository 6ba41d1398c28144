use thiserror::Error;

/// Errors raised while building, parsing or analysing games.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {msg}")]
    Syntax { line: usize, column: usize, msg: String },

    #[error("invalid `{field}`: {msg}")]
    Validation { field: String, msg: String },

    #[error("unknown state `{0}`")]
    UnknownState(String),

    #[error("({0}, {1}) is not an edge of the game")]
    UnknownEdge(String, String),

    #[error("expected a deterministic game, but `{0}` is probabilistic")]
    NotDeterministic(String),

    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),

    #[error("invalid play: {0}")]
    InvalidPlay(String),

    #[error("invalid word: {0}")]
    InvalidWord(String),

    #[error("unsupported objective: {0}")]
    UnsupportedObjective(String),

    #[error("instance too large for exhaustive search: {0}")]
    GuardExceeded(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn validation(field: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            msg: msg.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
