use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

/// Everything needed to rerun a command: its parameters, the digests of the
/// files it read, the seed and the tool version.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub parameters: serde_json::Value,
    pub input_digests: BTreeMap<String, String>,
    pub seed: u64,
    pub tool_version: String,
    pub duration_ms: f64,
    pub exit_code: i32,
}

impl RunManifest {
    pub fn path_for(out: &Path) -> PathBuf {
        let mut s = out.as_os_str().to_owned();
        s.push(".manifest.json");
        PathBuf::from(s)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
