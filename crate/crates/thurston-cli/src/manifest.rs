//! Run manifests: every output file is paired with
//! `<output>.manifest.json` recording the subcommand, the full parameter
//! set, the seed, the tool version, and SHA-256 digests of all input and
//! output files. Re-running the recorded command must reproduce the output
//! digests bit-exactly.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::errors::CliError;

#[derive(Debug, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub version: String,
    pub seed: Option<u64>,
    pub params: serde_json::Value,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
}

/// Hex SHA-256 of a file's bytes.
pub fn sha256_file(path: &Path) -> Result<String, CliError> {
    let bytes = fs::read(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

fn digests(paths: &[&Path]) -> Result<Vec<FileDigest>, CliError> {
    paths
        .iter()
        .map(|p| {
            Ok(FileDigest {
                path: p.display().to_string(),
                sha256: sha256_file(p)?,
            })
        })
        .collect()
}

/// The manifest path paired with an output file.
pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_os_string();
    name.push(".manifest.json");
    PathBuf::from(name)
}

/// Writes the manifest next to the first output file; with no output files
/// (stdout-only run) nothing is written.
pub fn emit(
    subcommand: &str,
    params: serde_json::Value,
    seed: Option<u64>,
    inputs: &[&Path],
    outputs: &[&Path],
) -> Result<Option<PathBuf>, CliError> {
    let Some(first) = outputs.first() else {
        return Ok(None);
    };
    let manifest = RunManifest {
        subcommand: subcommand.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed,
        params,
        inputs: digests(inputs)?,
        outputs: digests(outputs)?,
    };
    let path = manifest_path(first);
    fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n")
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
    Ok(Some(path))
}
