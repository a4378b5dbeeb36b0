use std::process::ExitCode;

use mpfsim_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Compare(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    /// Wraps a library error raised while handling `context`.
    pub fn core(context: &str, e: CoreError) -> Self {
        let msg = format!("{context}: {e}");
        if e.is_domain_error() {
            CliError::Domain(msg)
        } else {
            CliError::Config(msg)
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Config(_) | CliError::Io(_) => ExitCode::from(2),
            CliError::Domain(_) => ExitCode::from(3),
            CliError::Compare(_) => ExitCode::from(4),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
