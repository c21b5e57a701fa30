use std::path::PathBuf;

use pushrank::format::FormatError;
use pushrank::{GraphError, OracleError, RankError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Graph { path: PathBuf, source: GraphError },
    #[error("{path}: {source}")]
    Format { path: PathBuf, source: FormatError },
    #[error(transparent)]
    Rank(#[from] RankError),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Usage(String),
    #[error("oracle: {0}")]
    Oracle(OracleError),
    #[error("push limit reached; output is partial")]
    Truncated,
    #[error("compare: distance exceeds the claimed bound")]
    CompareFailed,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Rank(RankError::InvalidAlpha(_) | RankError::InvalidEpsilon(_)) => 2,
            CliError::Truncated => 3,
            CliError::Oracle(OracleError::TooLarge { .. }) => 4,
            CliError::Oracle(OracleError::InvalidAlpha(_)) => 2,
            CliError::CompareFailed => 5,
            _ => 1,
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        CliError::Oracle(e)
    }
}
