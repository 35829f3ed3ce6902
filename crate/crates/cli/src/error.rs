use thiserror::Error;

/// Failures that stop a run, each with its process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("resource budget exceeded: {0}")]
    Budget(String),

    #[error("cannot write report {path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("{0}")]
    Core(relhyp::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Budget(_) => 3,
            CliError::Core(_) => 1,
        }
    }
}

impl From<relhyp::Error> for CliError {
    fn from(e: relhyp::Error) -> Self {
        match e {
            relhyp::Error::Budget { .. } => CliError::Budget(e.to_string()),
            relhyp::Error::UnsupportedMode | relhyp::Error::Parse(_) | relhyp::Error::InvalidGroup(_) | relhyp::Error::InvalidFactor(_) => CliError::Config(e.to_string()),
            other => CliError::Core(other),
        }
    }
}
