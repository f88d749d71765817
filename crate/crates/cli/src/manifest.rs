use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use termbench_core::dataset::{Hyperparameters, GENERATOR_NAME};

use crate::error::{io, CliError};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub completed_at: String,
    /// Run-relative path → SHA-256.
    pub outputs: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub details: serde_json::Value,
}

/// Provenance for one run directory. Rewritten atomically after every
/// stage; the only file in the run that carries wall-clock timestamps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub config: serde_json::Value,
    pub generator: String,
    pub seeds: BTreeMap<String, u64>,
    pub validation_cap: Option<usize>,
    pub release_tags: BTreeMap<String, Option<String>>,
    /// Input path → SHA-256.
    pub input_digests: BTreeMap<String, String>,
    pub hyperparameters: Hyperparameters,
    pub stages: BTreeMap<String, StageRecord>,
}

impl Default for RunManifest {
    fn default() -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config: serde_json::Value::Null,
            generator: GENERATOR_NAME.to_string(),
            seeds: BTreeMap::new(),
            validation_cap: None,
            release_tags: BTreeMap::new(),
            input_digests: BTreeMap::new(),
            hyperparameters: Hyperparameters::default(),
            stages: BTreeMap::new(),
        }
    }
}

impl RunManifest {
    pub fn load_or_default(run_dir: &Path) -> Result<Self, CliError> {
        let path = run_dir.join(MANIFEST_FILE);
        if !path.exists() {
            return Ok(Self::default());
        }
        let text = fs::read_to_string(&path).map_err(io(format!("reading {}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{} is not a valid manifest: {e}", path.display())))
    }

    pub fn save(&self, run_dir: &Path) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(self).map_err(termbench_core::Error::from)?;
        text.push('\n');
        write_atomic(&run_dir.join(MANIFEST_FILE), text.as_bytes())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn digest_file(path: &Path) -> Result<String, CliError> {
    let bytes = fs::read(path).map_err(io(format!("reading {}", path.display())))?;
    Ok(sha256_hex(&bytes))
}

/// Writes through a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(io(format!("creating {}", dir.display())))?;
    }
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    fs::write(&tmp, bytes).map_err(io(format!("writing {}", tmp.display())))?;
    fs::rename(&tmp, path).map_err(io(format!("renaming {} into place", tmp.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn save_and_reload() {
        let dir = tempfile::tempdir().unwrap();
        let mut m = RunManifest::default();
        m.seeds.insert("sampling".into(), 42);
        m.save(dir.path()).unwrap();
        assert_eq!(RunManifest::load_or_default(dir.path()).unwrap(), m);
        assert!(!dir.path().join(".manifest.json.tmp").exists());
    }

    #[test]
    fn digest_is_sha256() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
