use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("scenario precondition violated: {0}")]
    Precondition(String),
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] hk4_core::Error),
    #[error("thread pool: {0}")]
    Pool(String),
}

impl CliError {
    /// 2 for usage and input errors, 3 for scenario preconditions.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Precondition(_) => 3,
            _ => 2,
        }
    }
}
