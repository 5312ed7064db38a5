//! Command-line experiments on top of `mesoent-core`: negativity curves,
//! γ and temperature sweeps, the verification suite and CLT tables.

pub mod clt;
pub mod config;
pub mod experiment;
pub mod output;
pub mod verify;

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {field}: {reason}")]
    Config { field: String, reason: String },
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Model(#[from] mesoent_core::Error),
}

impl CliError {
    /// 2 for configuration problems, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Config { .. } => 2,
            _ => 1,
        }
    }
}
