use std::path::PathBuf;

use synthcity_core::dataset::DatasetError;
use synthcity_core::eval::EvalError;
use thiserror::Error;

use crate::config::ConfigError;

/// Usage and configuration problems exit with 2, everything else with 1.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("{0}")]
    Operation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 2,
            _ => 1,
        }
    }

    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }

    pub fn format(path: impl Into<PathBuf>, message: impl ToString) -> CliError {
        CliError::Format { path: path.into(), message: message.to_string() }
    }

    /// Machine-readable form printed on failure.
    pub fn to_json(&self) -> serde_json::Value {
        let kind = match self {
            CliError::Usage(_) => "usage",
            CliError::Config(_) => "config",
            CliError::Io { .. } => "io",
            CliError::Format { .. } => "format",
            CliError::Dataset(_) => "dataset",
            CliError::Eval(_) => "eval",
            CliError::Operation(_) => "operation",
        };
        serde_json::json!({ "error": kind, "message": self.to_string(), "exit_code": self.exit_code() })
    }
}
