use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_clusters: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<String>,
    pub seed: u64,
    /// Worker threads actually used.
    pub threads: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tile: Option<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maximize: Option<bool>,
}

/// Record of one CLI run, written as `manifest.json` next to the outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub input: Option<PathBuf>,
    pub subcommand: String,
    pub params: RunParams,
    /// Wall-clock milliseconds per stage.
    pub timings_ms: BTreeMap<String, f64>,
    /// Every file the run wrote, including this manifest.
    pub outputs: Vec<PathBuf>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub stats: BTreeMap<String, serde_json::Value>,
}

impl RunManifest {
    pub fn new(subcommand: &str, input: Option<&Path>, params: RunParams) -> Self {
        RunManifest {
            input: input.map(Path::to_path_buf),
            subcommand: subcommand.to_string(),
            params,
            timings_ms: BTreeMap::new(),
            outputs: Vec::new(),
            stats: BTreeMap::new(),
        }
    }

    pub fn timing(&mut self, stage: &str, ms: f64) {
        self.timings_ms.insert(stage.to_string(), ms.max(0.0));
    }

    pub fn stat(&mut self, key: &str, value: impl Into<serde_json::Value>) {
        self.stats.insert(key.to_string(), value.into());
    }

    /// Appends the manifest's own path to `outputs` and writes it.
    pub fn write(mut self, dir: &Path) -> Result<RunManifest, CliError> {
        let path = dir.join(MANIFEST_FILE);
        self.outputs.push(path.clone());
        let json = serde_json::to_string_pretty(&self).map_err(|e| CliError::Internal(e.to_string()))?;
        fs::write(&path, json + "\n").map_err(|source| CliError::Write { path, source })?;
        Ok(self)
    }

    pub fn read(path: &Path) -> Result<RunManifest, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|e| CliError::Internal(format!("{}: {e}", path.display())))
    }
}
