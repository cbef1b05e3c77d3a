use std::fs;
use std::path::Path;

use anyhow::Context;
use serde::Serialize;
use serde_json::Value;

pub const MANIFEST_FILE: &str = "manifest.json";

/// Full parameter set of one invocation, written next to its outputs.
#[derive(Serialize)]
pub struct RunManifest<'a, P: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub parameters: &'a P,
    /// Values derived from the flags (coupling conversions, defaults).
    pub resolved: Value,
    pub output_dir: String,
    pub outputs: Vec<String>,
    pub assumptions: Vec<String>,
}

impl<'a, P: Serialize> RunManifest<'a, P> {
    pub fn new(command: &'static str, parameters: &'a P, out: &Path) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            parameters,
            resolved: Value::Null,
            output_dir: out.display().to_string(),
            outputs: Vec::new(),
            assumptions: Vec::new(),
        }
    }

    pub fn write(&self, out: &Path) -> anyhow::Result<()> {
        let path = out.join(MANIFEST_FILE);
        fs::write(&path, serde_json::to_string_pretty(self)? + "\n")
            .with_context(|| format!("writing {}", path.display()))
    }
}

pub fn ensure_dir(out: &Path) -> anyhow::Result<()> {
    fs::create_dir_all(out).with_context(|| format!("creating output directory {}", out.display()))
}
