use thiserror::Error;

/// Errors produced by world parsing, interrogation, and the diagnosis algorithms.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("world string is empty")]
    EmptyWorld,

    #[error("invalid processor type {found:?} at position {position} (expected K, V or N)")]
    InvalidType { position: usize, found: char },

    #[error("processor index {index} out of range for a world of {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("scripted strategy exhausted after {consumed} answers")]
    ScriptExhausted { consumed: usize },

    #[error("no candidate survived elimination; the Normals are not a strict minority")]
    NoSurvivor,

    #[error("normal budget {budget} is not below half of {members} members")]
    BudgetTooLarge { budget: usize, members: usize },

    #[error("unknown algorithm {0:?}")]
    UnknownAlgorithm(String),

    #[error("unknown strategy {0:?}")]
    UnknownStrategy(String),

    #[error("invalid answer {0:?} (expected yes or no)")]
    InvalidAnswer(String),

    #[error("strategy {0} requires a {1}")]
    MissingParameter(&'static str, &'static str),

    #[error("invalid range: {0}")]
    InvalidRange(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
