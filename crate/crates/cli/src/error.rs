use std::path::PathBuf;

use thiserror::Error;

/// Failures of a CLI run, each tied to a fixed exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{context} {path}: {source}", path = path.display())]
    Io { context: &'static str, path: PathBuf, source: std::io::Error },

    /// One or more identity checks exceeded their tolerance.
    #[error("check failed: {}", names.join(", "))]
    CheckFailed { names: Vec<String> },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::CheckFailed { .. } => 1,
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

/// Library errors reach the front end only through the requested
/// configuration, so all of them are reported as usage errors.
impl From<ptlg::Error> for CliError {
    fn from(e: ptlg::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
