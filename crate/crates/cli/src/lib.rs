//! Batch runner for the relhyp verification suites.
//!
//! A run reads a TOML config, executes the selected suites in a fixed
//! order and writes `<suite>.csv` tables plus a `<suite>.json` summary into
//! the output directory. Reports contain no timestamps, so identical
//! configs and seeds give byte-identical files.

pub mod config;
pub mod error;
pub mod report;
pub mod suites;

use std::path::PathBuf;

use serde::Serialize;

pub use config::{Overrides, RunConfig};
pub use error::CliError;

use suites::Context;

/// Outcome of one suite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteOutcome {
    pub suite: String,
    pub failures: Vec<String>,
    pub files: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunOutcome {
    pub out: PathBuf,
    pub suites: Vec<SuiteOutcome>,
}

impl RunOutcome {
    pub fn ok(&self) -> bool {
        self.suites.iter().all(|s| s.failures.is_empty())
    }

    /// 0 when every check passed, 1 on a violation or certification failure.
    pub fn exit_code(&self) -> i32 {
        if self.ok() {
            0
        } else {
            1
        }
    }
}

/// Validates the config, runs its suites and writes the reports.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome, CliError> {
    cfg.validate()?;
    let mut ctx = Context::new(cfg)?;
    let out = cfg.run.out.clone();
    std::fs::create_dir_all(&out).map_err(|source| CliError::Io { path: out.display().to_string(), source })?;
    let mode = if ctx.is_exact() { "exact" } else { "bfs" };
    let mut suites = Vec::new();
    for name in cfg.suites() {
        let r = ctx.run(name)?;
        let mut files = Vec::new();
        for t in &r.tables {
            report::write_file(&out, &t.file, &t.to_csv()?)?;
            files.push(t.file.clone());
        }
        let mut summary = r.summary;
        if let Some(obj) = summary.as_object_mut() {
            obj.entry("census").or_insert(serde_json::to_value(r.census).unwrap_or_default());
        }
        let doc = report::summary_document(r.name, &cfg.group.name, mode, cfg.seed(), &r.failures, summary);
        let json_name = format!("{}.json", r.name);
        report::write_file(&out, &json_name, &report::to_json_bytes(&doc)?)?;
        files.push(json_name);
        suites.push(SuiteOutcome { suite: r.name.to_string(), failures: r.failures, files });
    }
    Ok(RunOutcome { out, suites })
}
