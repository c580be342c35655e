//! Configuration, figure presets and CSV output for the `stosc` binary.

pub mod config;
pub mod manifest;
pub mod output;
pub mod presets;
pub mod run;

use std::path::PathBuf;

use thiserror::Error;

pub use config::parse_config;
pub use manifest::{InitialKind, Outputs, RunManifest, Variant, FORMAT_VERSION};
pub use output::{preflight, write_outputs};
pub use presets::{preset, PRESETS};
pub use run::{run_manifest, RunResults, VariantResult};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}, key `{key}`: {message}")]
pub struct ConfigError {
    pub line: usize,
    pub key: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(line: usize, key: impl Into<String>, message: impl Into<String>) -> Self {
        Self { line, key: key.into(), message: message.into() }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error("unknown preset `{name}`; valid presets: {valid}")]
    UnknownPreset { name: String, valid: String },

    #[error(transparent)]
    Core(#[from] stosc_core::Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// 1 for anything caught before simulating, 2 for runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::UnknownPreset { .. } => 1,
            CliError::Core(_) | CliError::Io { .. } => 2,
        }
    }
}
