use std::path::PathBuf;

use thiserror::Error;

use crate::search::SearchState;
use crate::verifier::FailureReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: malformed number token `{token}`")]
    Parse { line: usize, token: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("search budget exhausted after {} configurations; state is resumable", .0.examined)]
    BudgetExceeded(Box<SearchState>),

    #[error("certification of `{}` failed with {} surviving boxes", .0.target, .0.surviving_count)]
    CertificationFailed(Box<FailureReport>),

    #[error("checkpoint {path}: version `{found}` does not match `{expected}`")]
    CheckpointVersion {
        path: PathBuf,
        found: String,
        expected: String,
    },

    #[error("checkpoint {path}: corrupt file ({reason})")]
    CheckpointCorrupt { path: PathBuf, reason: String },

    #[error("checkpoint was written for a different search: {0}")]
    CheckpointMismatch(String),

    #[error("certificate replay failed: {0}")]
    Replay(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
