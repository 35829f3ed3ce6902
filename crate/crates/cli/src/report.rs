//! Report files: CSV tables and one JSON summary per suite.

use std::path::Path;

use serde_json::{json, Value};

use crate::error::CliError;

/// A CSV table held in memory until the suite finishes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub file: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(file: &str, header: &[&str]) -> Self {
        Self::with_header(file, header.iter().map(|h| h.to_string()).collect())
    }

    pub fn with_header(file: &str, header: Vec<String>) -> Self {
        Self { file: file.to_string(), header, rows: Vec::new() }
    }

    pub fn row<I: IntoIterator<Item = String>>(&mut self, cells: I) {
        self.rows.push(cells.into_iter().collect());
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io { path: self.file.clone(), source: e.into() };
        w.write_record(&self.header).map_err(io)?;
        for r in &self.rows {
            w.write_record(r).map_err(io)?;
        }
        w.into_inner().map_err(|e| CliError::Io { path: self.file.clone(), source: e.into_error() })
    }
}

/// The JSON document written as `<suite>.json`.
pub fn summary_document(suite: &str, group: &str, mode: &str, seed: u64, failures: &[String], report: Value) -> Value {
    json!({
        "suite": suite,
        "group": group,
        "mode": mode,
        "seed": seed,
        "status": if failures.is_empty() { "ok" } else { "violation" },
        "failures": failures,
        "report": report,
    })
}

pub fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<(), CliError> {
    let path = dir.join(name);
    std::fs::write(&path, bytes).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

pub fn to_json_bytes(v: &Value) -> Result<Vec<u8>, CliError> {
    let mut bytes = serde_json::to_vec_pretty(v).map_err(|e| CliError::Io { path: "summary".into(), source: e.into() })?;
    bytes.push(b'\n');
    Ok(bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quotes_cells_with_commas() {
        let mut t = Table::new("x.csv", &["a", "b"]);
        t.row(["1".to_string(), "p, q".to_string()]);
        assert_eq!(String::from_utf8(t.to_csv().unwrap()).unwrap(), "a,b\n1,\"p, q\"\n");
    }

    #[test]
    fn status_follows_failures() {
        let d = summary_document("ap", "G", "exact", 1, &[], json!({}));
        assert_eq!(d["status"], "ok");
        let d = summary_document("ap", "G", "exact", 1, &["bad".into()], json!({}));
        assert_eq!(d["status"], "violation");
    }
}
