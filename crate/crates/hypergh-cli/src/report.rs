//! Machine-readable run reports: the command line as given, a digest of every
//! input file, the results object, and wall-clock timing. Everything except
//! `timing_ms` is deterministic for identical inputs, flags, and seed.

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::Path;

#[derive(Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub results: serde_json::Value,
    pub timing_ms: f64,
}

impl Report {
    pub fn render(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("reports serialize");
        text.push('\n');
        text
    }
}

pub fn digest(path: &Path) -> std::io::Result<InputDigest> {
    let bytes = std::fs::read(path)?;
    let hash = Sha256::digest(&bytes);
    let sha256 = hash.iter().map(|b| format!("{b:02x}")).collect::<String>();
    Ok(InputDigest { path: path.display().to_string(), sha256 })
}
