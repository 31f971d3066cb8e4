//! Versioned JSON report bundle and CSV ratio tables.
//!
//! Reports are deterministic byte-for-byte for a fixed config and seed:
//! struct field order fixes the JSON layout, rows are emitted in sorted
//! pair order, and the wall-clock timestamp lives in a separate
//! `run_meta.json` so reruns can be compared directly.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

use crate::config::RunConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Passed,
    Failed,
    Skipped,
    /// Measured and recorded, no bound asserted.
    Info,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: String,
    /// None for epsilon-independent checks.
    pub epsilon: Option<f64>,
    pub status: CheckStatus,
    pub summary: String,
    pub detail: Value,
}

impl CheckRecord {
    pub fn new(
        name: &str,
        epsilon: Option<f64>,
        status: CheckStatus,
        summary: impl Into<String>,
        detail: impl Serialize,
    ) -> Self {
        Self {
            name: name.to_string(),
            epsilon,
            status,
            summary: summary.into(),
            detail: serde_json::to_value(detail).unwrap_or(Value::Null),
        }
    }

    pub fn skipped(name: &str, epsilon: Option<f64>, reason: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            epsilon,
            status: CheckStatus::Skipped,
            summary: reason.into(),
            detail: Value::Null,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphSummary {
    pub generator: String,
    pub params: String,
    pub nodes: usize,
    pub edges: usize,
    pub base: u32,
    pub frontier_size: usize,
}

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub info: usize,
}

#[derive(Debug, Serialize)]
pub struct ReportBundle {
    pub schema_version: u32,
    pub config: RunConfig,
    pub graph: GraphSummary,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

impl ReportBundle {
    pub fn new(config: RunConfig, graph: GraphSummary) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            config,
            graph,
            checks: Vec::new(),
            summary: Summary::default(),
        }
    }

    pub fn push(&mut self, record: CheckRecord) {
        match record.status {
            CheckStatus::Passed => self.summary.passed += 1,
            CheckStatus::Failed => self.summary.failed += 1,
            CheckStatus::Skipped => self.summary.skipped += 1,
            CheckStatus::Info => self.summary.info += 1,
        }
        self.checks.push(record);
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)
            .with_context(|| format!("creating output dir {}", dir.display()))?;
        std::fs::write(dir.join("report.json"), self.to_json())?;
        Ok(())
    }
}

/// Wall-clock metadata, kept out of report.json so repeated runs are
/// byte-identical there.
pub fn write_run_meta(dir: &Path) -> Result<()> {
    let now = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let meta = serde_json::json!({
        "tool": "uniformize",
        "version": env!("CARGO_PKG_VERSION"),
        "unix_time": now,
    });
    std::fs::create_dir_all(dir)?;
    std::fs::write(
        dir.join("run_meta.json"),
        format!("{}\n", serde_json::to_string_pretty(&meta)?),
    )?;
    Ok(())
}

/// Minimal CSV writer: header plus rows of plain `Display` cells.
pub struct CsvTable {
    text: String,
    columns: usize,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        Self {
            text: format!("{}\n", header.join(",")),
            columns: header.len(),
        }
    }

    pub fn row(&mut self, cells: &[String]) {
        debug_assert_eq!(cells.len(), self.columns);
        let _ = writeln!(self.text, "{}", cells.join(","));
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        std::fs::write(path, &self.text)
            .with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }
}

/// Stable file-name fragment for an epsilon value (0.5 -> "0p5").
pub fn eps_tag(eps: f64) -> String {
    eps.to_string().replace('.', "p").replace('-', "m")
}
