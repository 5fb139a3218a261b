use std::path::{Path, PathBuf};

use thiserror::Error;

/// Failure of a command, split by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Validation(_) => 2,
            Self::Io { .. } => 3,
        }
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Self::Validation(message.into())
    }

    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io { path: path.to_path_buf(), source }
    }

    /// Malformed contents become validation errors, failed reads and writes
    /// I/O errors.
    pub(crate) fn csv(path: &Path, err: csv::Error) -> Self {
        if err.is_io_error() {
            match err.into_kind() {
                csv::ErrorKind::Io(source) => Self::io(path, source),
                _ => unreachable!(),
            }
        } else {
            Self::Validation(format!("{}: {err}", path.display()))
        }
    }
}

impl From<kicked_top::Error> for CliError {
    fn from(err: kicked_top::Error) -> Self {
        Self::Validation(err.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
