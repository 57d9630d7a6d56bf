//! Run manifests: a JSON sidecar written next to every output file so the
//! run can be reproduced from the manifest alone. All defaults are
//! materialized into `resolved`, so the file stays meaningful even when the
//! tool's defaults change later.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::CliError;

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool_version: &'static str,
    /// The argv the tool was invoked with, for the humans reading the file.
    pub command: Vec<String>,
    /// Every flag with defaults filled in; `resolved` alone reproduces the run.
    pub resolved: BTreeMap<String, String>,
    /// Base RNG seed for commands that draw noise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base_seed: Option<u64>,
}

impl RunManifest {
    pub fn new(resolved: BTreeMap<String, String>, base_seed: Option<u64>) -> Self {
        RunManifest {
            tool_version: env!("CARGO_PKG_VERSION"),
            command: std::env::args().collect(),
            resolved,
            base_seed,
        }
    }

    /// Writes `<output>.manifest.json` next to the output it describes.
    pub fn write_for(&self, output: &Path) -> Result<(), CliError> {
        let path = sidecar_path(output);
        let json = serde_json::to_string_pretty(self).expect("manifest serialization cannot fail");
        std::fs::write(&path, json + "\n").map_err(|e| CliError::io(&path, e))
    }
}

pub fn sidecar_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    output.with_file_name(name)
}
