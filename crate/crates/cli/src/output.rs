use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// 17 significant digits, fixed exponent form.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self { name: name.to_string(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn file_name(&self) -> String {
        format!("{}.csv", self.name)
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.into_error()))
    }

    /// Index of a header column.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }
}

/// Result of one subcommand before it is written out.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub command: String,
    pub tables: Vec<Table>,
    pub summary: serde_json::Value,
    /// False when a check inside the command failed (exit code 1).
    pub passed: bool,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub seed: u64,
    pub threads: usize,
    pub wall_time_s: f64,
    pub config: String,
    /// File name → sha256 of its bytes.
    pub checksums: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn render(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("command = {}\n", self.command));
        s.push_str(&format!("version = {}\n", self.version));
        s.push_str(&format!("seed = {}\n", self.seed));
        s.push_str(&format!("threads = {}\n", self.threads));
        s.push_str(&format!("wall_time_s = {:.3}\n", self.wall_time_s));
        s.push_str("\n[checksums]\n");
        for (name, sum) in &self.checksums {
            s.push_str(&format!("{name} = {sum}\n"));
        }
        s.push_str("\n[config]\n");
        for line in self.config.lines() {
            s.push_str(&format!("  {line}\n"));
        }
        s
    }
}

/// Serialized files of a run, keyed by file name.
pub fn render_files(out: &RunOutput) -> Result<BTreeMap<String, Vec<u8>>, CliError> {
    let mut files = BTreeMap::new();
    for t in &out.tables {
        files.insert(t.file_name(), t.to_csv()?);
    }
    let mut summary = serde_json::to_vec_pretty(&out.summary)?;
    summary.push(b'\n');
    files.insert(format!("{}_summary.json", out.command), summary);
    Ok(files)
}

pub fn checksums(files: &BTreeMap<String, Vec<u8>>) -> BTreeMap<String, String> {
    files.iter().map(|(k, v)| (k.clone(), sha256_hex(v))).collect()
}

/// Writes the tables, the JSON summary and `manifest.txt` into `dir`.
pub fn write_run(dir: &Path, files: &BTreeMap<String, Vec<u8>>, manifest: &RunManifest) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    for (name, bytes) in files {
        fs::write(dir.join(name), bytes)?;
    }
    fs::write(dir.join("manifest.txt"), manifest.render())?;
    Ok(())
}

/// Parses `name = sha256` lines; `#` comments allowed.
pub fn parse_golden(text: &str) -> BTreeMap<String, String> {
    text.lines()
        .filter_map(|l| {
            let l = l.split('#').next()?.trim();
            let (k, v) = l.split_once('=')?;
            Some((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

/// Names whose checksum differs from (or is missing in) the golden set.
pub fn golden_mismatches(actual: &BTreeMap<String, String>, golden: &BTreeMap<String, String>) -> Vec<String> {
    golden
        .iter()
        .filter(|(name, sum)| actual.get(*name) != Some(*sum))
        .map(|(name, _)| name.clone())
        .collect()
}
