//! Run manifest written next to the outputs.

use fluxsim::dissipation::CellFailure;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

impl OutputRecord {
    pub fn new(path: impl Into<String>, contents: &[u8]) -> Self {
        Self {
            path: path.into(),
            sha256: hex::encode(Sha256::digest(contents)),
            bytes: contents.len(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CacheStats {
    pub enabled: bool,
    pub hits: usize,
    pub misses: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub subcommand: String,
    pub config_name: String,
    pub config_hash: String,
    pub outputs: Vec<OutputRecord>,
    /// Wall-clock seconds per stage.
    pub timings: BTreeMap<String, f64>,
    pub cache: CacheStats,
    pub jobs: usize,
    pub failures: Vec<CellFailure>,
}
