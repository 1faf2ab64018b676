use std::path::PathBuf;

use gpc_core::GpcError;
use thiserror::Error;

/// Failures that end a command with exit code 1. Physics violations are not
/// errors; they are carried in the run outcome.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },

    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },

    #[error("invalid configuration: {0}")]
    Json(#[from] serde_json::Error),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] GpcError),

    #[error("repro suite: {0}")]
    Repro(String),
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
