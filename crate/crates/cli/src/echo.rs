use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use rppg_confounds::io::{write_text, Manifest};
use serde::{Deserialize, Serialize};

use crate::args::Command;

pub const CONFIG_FILE: &str = "run_config.json";

/// Everything needed to repeat a run: the resolved command with all
/// defaults filled in, and the inputs it read.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub tool: String,
    pub version: String,
    pub run: Command,
    pub inputs: Vec<Manifest>,
}

pub fn write(out: &Path, run: &Command, inputs: Vec<Manifest>) -> Result<()> {
    let cfg = RunConfig {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        run: run.clone(),
        inputs,
    };
    let mut text = serde_json::to_string_pretty(&cfg)?;
    text.push('\n');
    write_text(&out.join(CONFIG_FILE), &text)?;
    Ok(())
}

pub fn read(path: &Path) -> Result<RunConfig> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Absolute form of an input path, so a replay works from any directory.
pub fn resolve(path: &Path) -> Result<PathBuf> {
    std::fs::canonicalize(path).with_context(|| format!("input {}", path.display()))
}
