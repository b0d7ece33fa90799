use std::process::ExitCode;

use awg_core::Error as ModelError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Model(#[from] ModelError),

    #[error("self-check failed")]
    SelfCheck,

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for usage or configuration problems, 3 for numerical failures, 1 for I/O.
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Config(_) => 2,
            CliError::Model(ModelError::Validation(_) | ModelError::UnknownScenario(_)) => 2,
            CliError::Model(_) | CliError::SelfCheck => 3,
            CliError::Io(_) => 1,
        })
    }
}
