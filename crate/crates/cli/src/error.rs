use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] inhomqa::Error),

    #[error("{0}")]
    Usage(String),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{}: {source}", path.display())]
    Json { path: PathBuf, source: serde_json::Error },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    /// 2 for solver non-convergence, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(inhomqa::Error::NonConvergence { .. }) => 2,
            _ => 1,
        }
    }
}
