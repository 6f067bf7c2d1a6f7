use thiserror::Error;

/// Errors shared by all engine modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported poset: {0}")]
    UnsupportedPoset(String),

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("property violation: {0}")]
    PropertyViolation(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, col, msg: msg.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
