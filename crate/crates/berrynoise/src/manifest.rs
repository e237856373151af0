//! Per-run provenance record. Contains no timestamps or host details, so
//! reruns of the same config produce identical manifests.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Versions {
    pub berrynoise: &'static str,
    pub berrynoise_core: &'static str,
}

impl Versions {
    pub fn current() -> Self {
        Versions {
            berrynoise: env!("CARGO_PKG_VERSION"),
            berrynoise_core: berrynoise_core::VERSION,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub command: String,
    /// SHA-256 of the canonical TOML form of `config`.
    pub config_sha256: String,
    pub config: RunConfig,
    pub versions: Versions,
    /// Files written by the run, relative to the output directory.
    pub outputs: Vec<String>,
}

impl Manifest {
    pub fn new(command: &str, config: &RunConfig, outputs: Vec<String>) -> Self {
        Manifest {
            command: command.into(),
            config_sha256: config_hash(config),
            config: config.clone(),
            versions: Versions::current(),
            outputs,
        }
    }
}

pub fn config_hash(config: &RunConfig) -> String {
    Sha256::digest(config.to_toml().as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}
