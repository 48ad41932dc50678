//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by dataset ingestion, training, and reporting.
#[derive(Debug, Error)]
pub enum Error {
    /// A cell failed to parse. Row and column are 1-based; row counts data
    /// rows, not the header.
    #[error("parse failure at row {row}, column {column}: {message}")]
    CellParse {
        row: usize,
        column: usize,
        message: String,
    },

    /// Input violated a documented precondition.
    #[error("{0}")]
    InvalidInput(String),

    /// An operation was asked to score an empty node.
    #[error("empty node: class counts sum to zero")]
    EmptyNode,

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    /// A state the implementation promises never to reach.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Process exit code for the CLI: 2 for data/input problems, 3 for
    /// internal invariant violations.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Internal(_) | Error::EmptyNode => 3,
            _ => 2,
        }
    }
}
