//! Manifests as JSON lines: a header object, then one record per line in
//! tile-id order.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use synthcity_core::dataset::{DatasetManifest, ManifestHeader, TileRecord};

use crate::error::CliError;

pub const MANIFEST_FILE: &str = "manifest.jsonl";

pub fn to_jsonl(m: &DatasetManifest) -> String {
    let mut out = serde_json::to_string(&m.header()).expect("header serializes");
    out.push('\n');
    for r in &m.records {
        let _ = writeln!(out, "{}", serde_json::to_string(r).expect("record serializes"));
    }
    out
}

pub fn from_jsonl(text: &str) -> Result<DatasetManifest, String> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, first) = lines.next().ok_or("empty manifest")?;
    let header: ManifestHeader = serde_json::from_str(first).map_err(|e| format!("line 1: {e}"))?;
    let records = lines
        .map(|(i, l)| serde_json::from_str::<TileRecord>(l).map_err(|e| format!("line {}: {e}", i + 1)))
        .collect::<Result<Vec<_>, _>>()?;
    if records.len() != header.records {
        return Err(format!("header announces {} records, found {}", header.records, records.len()));
    }
    Ok(DatasetManifest::new(header.dataset_id, header.params_hash, records))
}

pub fn write(path: &Path, m: &DatasetManifest) -> Result<(), CliError> {
    fs::write(path, to_jsonl(m)).map_err(CliError::io(path))
}

pub fn read(path: &Path) -> Result<DatasetManifest, CliError> {
    let text = fs::read_to_string(path).map_err(CliError::io(path))?;
    let m = from_jsonl(&text).map_err(|e| CliError::format(path, e))?;
    m.validate().map_err(|e| CliError::format(path, e))?;
    Ok(m)
}

/// Directory that record paths are relative to.
pub fn base_dir(manifest_path: &Path) -> &Path {
    manifest_path.parent().unwrap_or(Path::new("."))
}
