use thiserror::Error;

use crate::certificate::PartitionCertificate;
use crate::ramsey::Cover;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Partial output attached to budget failures.
#[derive(Debug, Clone)]
pub enum Partial {
    Cover(Cover),
    Certificate(PartitionCertificate),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("instance too large: {what} is {size}, limit {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("not found: {0}")]
    NotFound(String),

    /// Greedy extension ran out of candidates for a vertex.
    #[error("embedding stuck at source vertex {vertex}")]
    Stuck { vertex: usize },

    #[error("budget exhausted: {reason}")]
    Budget {
        reason: String,
        partial: Box<Partial>,
    },

    #[error("unknown family `{0}`")]
    UnknownFamily(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
