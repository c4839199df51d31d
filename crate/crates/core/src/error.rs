use thiserror::Error;

use crate::domain::Defect;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Caller supplied arguments that violate an operation's precondition.
    #[error("invalid input: {0}")]
    Input(String),

    #[error("instance has {} structural defect(s); first: {}", .0.len(), .0[0])]
    InvalidInstance(Vec<Defect>),

    /// The exact solver declined an instance outside its limits.
    #[error("oracle refused instance: {0}")]
    Refused(String),

    #[error("resource limit exhausted: {0}")]
    ResourceExhausted(String),

    #[error("{path}: {message}")]
    Document { path: String, message: String },

    #[error("malformed document at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn document(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Document {
            path: path.into(),
            message: message.into(),
        }
    }
}
