use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const NOT_CONVERGED: i32 = 2;
    pub const IO: i32 = 3;
    pub const FAILED: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] qspline_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Core(qspline_core::Error::InvalidArgument(_)) => exit::USAGE,
            CliError::Io { .. } => exit::IO,
            CliError::Core(_) => exit::FAILED,
        }
    }
}
