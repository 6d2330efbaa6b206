//! Provenance record attached to every command output.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub arguments: Vec<String>,
    pub seed: Option<u64>,
    pub version: String,
    /// SHA-256 of every input file, keyed by the path as given.
    pub inputs: BTreeMap<String, String>,
    pub wall_time_s: f64,
}

/// Collects inputs while a command runs and stamps the elapsed time at the end.
pub struct Recorder {
    manifest: RunManifest,
    start: Instant,
}

impl Recorder {
    pub fn new(command: &str, seed: Option<u64>) -> Self {
        Recorder {
            manifest: RunManifest {
                command: command.into(),
                arguments: std::env::args().skip(1).collect(),
                seed,
                version: env!("CARGO_PKG_VERSION").into(),
                inputs: BTreeMap::new(),
                wall_time_s: 0.0,
            },
            start: Instant::now(),
        }
    }

    pub fn set_seed(&mut self, seed: u64) {
        self.manifest.seed = Some(seed);
    }

    /// Reads an input file and records its digest.
    pub fn read(&mut self, path: &Path) -> Result<String> {
        let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        self.manifest.inputs.insert(path.display().to_string(), hex::encode(Sha256::digest(&bytes)));
        String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))
    }

    pub fn finish(&self) -> RunManifest {
        RunManifest { wall_time_s: self.start.elapsed().as_secs_f64(), ..self.manifest.clone() }
    }
}
