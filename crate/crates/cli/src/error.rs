use std::path::PathBuf;
use thiserror::Error;

/// Failures surfaced by the scenario runner, each mapped to an exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("cannot read config {path}: {source}")]
    ReadConfig { path: PathBuf, source: std::io::Error },

    #[error("computation failed at {context}: {source}")]
    Compute { context: String, source: qdissip::Error },

    #[error("cannot write output: {0}")]
    Write(#[from] std::io::Error),
}

impl CliError {
    pub fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Config { path: path.into(), message: message.into() }
    }

    pub fn compute(context: impl Into<String>, source: qdissip::Error) -> Self {
        CliError::Compute { context: context.into(), source }
    }

    /// 2 for anything wrong with the config, 3 for numerical failures,
    /// 1 when the result cannot be written.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::ReadConfig { .. } => 2,
            CliError::Compute { .. } => 3,
            CliError::Write(_) => 1,
        }
    }
}
