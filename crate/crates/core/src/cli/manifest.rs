//! Run manifests: the parameters and checksums needed to reproduce a run.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::Command;
use crate::error::Result;

pub const MANIFEST_FILE: &str = "manifest.json";

/// A generated file, kept in memory until written.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub name: String,
    pub contents: String,
}

impl Output {
    pub fn new(name: impl Into<String>, contents: String) -> Self {
        Output { name: name.into(), contents }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    /// Full parameter set after defaulting.
    pub params: Command,
    pub seed: Option<u64>,
    pub version: String,
    /// File name to lowercase hex SHA-256 of its contents.
    pub outputs: BTreeMap<String, String>,
}

pub fn sha256_hex(contents: &str) -> String {
    Sha256::digest(contents.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

impl RunManifest {
    pub fn new(params: &Command, outputs: &[Output]) -> Self {
        RunManifest {
            subcommand: params.name().to_string(),
            params: params.clone(),
            seed: params.seed(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            outputs: outputs.iter().map(|o| (o.name.clone(), sha256_hex(&o.contents))).collect(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }

    /// Names of outputs whose checksum differs from the recorded one, or
    /// that are missing from either side.
    pub fn mismatches(&self, outputs: &[Output]) -> Vec<String> {
        let fresh: BTreeMap<&str, String> = outputs.iter().map(|o| (o.name.as_str(), sha256_hex(&o.contents))).collect();
        let mut bad: Vec<String> = self
            .outputs
            .iter()
            .filter(|(name, sum)| fresh.get(name.as_str()) != Some(*sum))
            .map(|(name, _)| name.clone())
            .collect();
        bad.extend(fresh.keys().filter(|name| !self.outputs.contains_key(**name)).map(|name| name.to_string()));
        bad
    }
}

/// Writes every output and the manifest into `dir`, creating it if needed.
pub fn write_all(dir: &Path, params: &Command, outputs: &[Output]) -> Result<()> {
    fs::create_dir_all(dir)?;
    for o in outputs {
        fs::write(dir.join(&o.name), &o.contents)?;
    }
    let manifest = RunManifest::new(params, outputs);
    // Parameters stay unrounded so that replay reruns exactly.
    fs::write(dir.join(MANIFEST_FILE), serde_json::to_string_pretty(&manifest)? + "\n")?;
    Ok(())
}
