use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("verification failed: {0} check(s) did not pass")]
    Verification(usize),
}

impl CliError {
    /// 1 for configuration and filesystem problems, 2 for failed checks.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 1,
            CliError::Verification(_) => 2,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: impl Into<std::io::Error>) -> Self {
        CliError::Io {
            path: path.into(),
            source: source.into(),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
