use std::io;
use std::path::PathBuf;

use thiserror::Error;
use tomwalk::{NetworkError, PassageError, WalkError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Passage(#[from] PassageError),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 for configuration and I/O problems, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } | CliError::Network(_) => 2,
            CliError::Walk(WalkError::Network(_) | WalkError::Generation { .. }) => 2,
            CliError::Passage(PassageError::Threshold(_) | PassageError::ZeroSteps | PassageError::NoVertexWithDegree(_)) => 2,
            CliError::Walk(_) | CliError::Passage(_) => 3,
        }
    }
}
