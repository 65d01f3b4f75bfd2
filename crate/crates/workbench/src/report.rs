//! Versioned JSON reports and atomic file output.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::WorkbenchError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

impl ToolInfo {
    pub fn current() -> Self {
        Self {
            name: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileEcho {
    pub path: String,
    pub sha256: String,
}

impl FileEcho {
    pub fn of(path: &Path) -> Result<Self, WorkbenchError> {
        let bytes = std::fs::read(path).map_err(|e| WorkbenchError::io(path, e))?;
        Ok(Self {
            path: path.display().to_string(),
            sha256: sha256_hex(&bytes),
        })
    }
}

/// Everything needed to repeat the run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Inputs {
    pub config_sha256: Option<String>,
    /// Verbatim configuration text.
    pub config_text: Option<String>,
    /// Configuration after unit normalization (rad/s).
    pub config: Option<serde_json::Value>,
    pub input: Option<FileEcho>,
    pub model: Option<String>,
    pub length_m: Option<f64>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport<R> {
    pub schema_version: u32,
    pub tool: ToolInfo,
    pub command: String,
    pub inputs: Inputs,
    /// Files written next to the report, relative to the output directory.
    pub outputs: Vec<String>,
    pub result: R,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Writes `bytes` to `dir/name` through a temporary file and a rename.
pub fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf, WorkbenchError> {
    std::fs::create_dir_all(dir).map_err(|e| WorkbenchError::io(dir, e))?;
    let target = dir.join(name);
    let tmp = dir.join(format!(".{name}.tmp"));
    std::fs::write(&tmp, bytes).map_err(|e| WorkbenchError::io(&tmp, e))?;
    std::fs::rename(&tmp, &target).map_err(|e| WorkbenchError::io(&target, e))?;
    Ok(target)
}

pub fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("report types serialize");
    out.push(b'\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_digest() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn atomic_write_leaves_no_temporary() {
        let dir = tempfile::tempdir().unwrap();
        let p = write_atomic(dir.path(), "a.json", b"{}").unwrap();
        assert_eq!(std::fs::read(p).unwrap(), b"{}");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
