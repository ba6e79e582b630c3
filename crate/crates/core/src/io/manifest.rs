//! Run manifest: `manifest.json` written alongside the outputs.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputEntry {
    /// Path relative to the run directory.
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
    /// Data rows, excluding the header; `None` for non-CSV outputs.
    pub rows: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub subcommand: String,
    /// Resolved configuration text; feeding it back reproduces the outputs.
    pub config: String,
    pub seeds: Vec<u64>,
    pub prng: Option<String>,
    pub duration_ms: f64,
    pub outputs: Vec<OutputEntry>,
}

impl RunManifest {
    pub fn output(&self, path: &str) -> Option<&OutputEntry> {
        self.outputs.iter().find(|o| o.path == path)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn read(dir: &Path) -> Result<RunManifest> {
        let path = dir.join(MANIFEST_FILE);
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::ConfigParse {
            line: e.line(),
            message: e.to_string(),
        })
    }

    /// Recomputes every digest from disk; returns the paths that differ.
    pub fn verify(&self, dir: &Path) -> Result<Vec<String>> {
        let mut bad = Vec::new();
        for o in &self.outputs {
            let path = dir.join(&o.path);
            let bytes = fs::read(&path).map_err(|e| Error::io(&path, e))?;
            if sha256_hex(&bytes) != o.sha256 {
                bad.push(o.path.clone());
            }
        }
        Ok(bad)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}
