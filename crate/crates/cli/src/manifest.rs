use std::io;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;

/// Record of one invocation: what ran, with which inputs, and what it wrote.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub params: Value,
    pub version: &'static str,
    /// Seconds since the Unix epoch. Informational only.
    pub timestamp: u64,
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    pub fn new(command: &str, params: Value) -> Self {
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        RunManifest { command: command.to_string(), params, version: env!("CARGO_PKG_VERSION"), timestamp, outputs: Vec::new() }
    }

    pub fn push(&mut self, path: PathBuf) {
        self.outputs.push(path);
    }

    /// Writes `manifest_<command>.json` into `dir` and returns its path.
    pub fn write(&self, dir: &Path) -> io::Result<PathBuf> {
        let path = dir.join(format!("manifest_{}.json", self.command));
        let body = serde_json::to_string_pretty(self).map_err(io::Error::other)?;
        std::fs::write(&path, body + "\n")?;
        Ok(path)
    }
}
