//! Run manifests: what a batch command was asked to do and what it wrote.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{read_file, write_file, CliError, CliResult};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub schema_version: String,
    pub kind: String,
    pub tool_version: String,
    /// Arguments after the program name.
    pub command: Vec<String>,
    /// SHA-256 of the command's effective configuration.
    pub config_hash: String,
    pub seeds: Vec<u64>,
    pub outputs: Vec<OutputFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputFile {
    /// Relative to the output directory, `/`-separated.
    pub path: String,
    pub sha256: String,
    /// Timing files differ between runs and are not compared on replay.
    pub deterministic: bool,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Collects the files a command writes under one output directory.
#[derive(Debug)]
pub struct OutputSet<'a> {
    dir: &'a Path,
    files: Vec<OutputFile>,
}

impl<'a> OutputSet<'a> {
    pub fn new(dir: &'a Path) -> Self {
        Self { dir, files: Vec::new() }
    }

    pub fn write(&mut self, rel: &str, bytes: &[u8]) -> CliResult<()> {
        self.write_as(rel, bytes, true)
    }

    pub fn write_timing(&mut self, rel: &str, bytes: &[u8]) -> CliResult<()> {
        self.write_as(rel, bytes, false)
    }

    fn write_as(&mut self, rel: &str, bytes: &[u8], deterministic: bool) -> CliResult<()> {
        write_file(&self.dir.join(rel), bytes)?;
        self.files.push(OutputFile {
            path: rel.to_string(),
            sha256: sha256_hex(bytes),
            deterministic,
        });
        Ok(())
    }

    /// Writes the manifest next to the outputs.
    pub fn finish(mut self, command: &[String], config: &serde_json::Value, seeds: Vec<u64>) -> CliResult<RunManifest> {
        self.files.sort_by(|a, b| a.path.cmp(&b.path));
        let manifest = RunManifest {
            schema_version: svcp::io::SCHEMA_VERSION.to_string(),
            kind: "manifest".to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_vec(),
            config_hash: sha256_hex(config.to_string().as_bytes()),
            seeds,
            outputs: self.files,
        };
        let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        text.push('\n');
        write_file(&self.dir.join(MANIFEST_FILE), text.as_bytes())?;
        Ok(manifest)
    }
}

pub fn read_manifest(path: &Path) -> CliResult<RunManifest> {
    let bytes = read_file(path)?;
    let m: RunManifest =
        serde_json::from_slice(&bytes).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    if m.kind != "manifest" || m.schema_version != svcp::io::SCHEMA_VERSION {
        return Err(CliError::Data(format!("{} is not an svcp/1 manifest", path.display())));
    }
    Ok(m)
}

/// `command` with its `--out` value replaced by `dir`.
pub fn with_output_dir(command: &[String], dir: &str) -> CliResult<Vec<String>> {
    let mut out = Vec::with_capacity(command.len());
    let mut replaced = false;
    let mut args = command.iter();
    while let Some(arg) = args.next() {
        if arg == "--out" {
            args.next();
            out.push(arg.clone());
            out.push(dir.to_string());
            replaced = true;
        } else if arg.starts_with("--out=") {
            out.push(format!("--out={dir}"));
            replaced = true;
        } else {
            out.push(arg.clone());
        }
    }
    if !replaced {
        return Err(CliError::Data("manifest command has no --out argument".into()));
    }
    Ok(out)
}
