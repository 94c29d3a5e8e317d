//! Output plumbing: CSV / JSON rendering and destination resolution.
//!
//! CSV is a plain comma-separated table with a header row, `.` decimal
//! marks, and 17 significant digits per number. JSON is one top-level
//! object per run: `meta` (version and the resolved config echo) and
//! `data`. Both renderings are deterministic byte-for-byte for a fixed
//! config and seed.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde_json::{json, Value};

/// Output rendering selected by `--format`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    /// Writes both renderings; needs `--out`, producing `OUT.csv` and
    /// `OUT.json`.
    Both,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "both" => Ok(Format::Both),
            other => Err(format!("unknown format '{other}' (expected csv, json or both)")),
        }
    }
}

/// One number rendered with 17 significant digits.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// The tabular face of a run, rendered as CSV.
pub struct Table {
    pub columns: Vec<String>,
    /// Preformatted cells, one inner vector per row.
    pub rows: Vec<Vec<String>>,
}

/// Column headers from string literals.
pub fn cols(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Everything a subcommand produces.
pub struct RunOutput {
    pub table: Table,
    /// JSON payload placed under `data`.
    pub data: Value,
    /// `Some(false)` turns into exit status 2 (verdict failure); errors on
    /// the way are exit 1.
    pub verdict_ok: Option<bool>,
}

fn csv_text(table: &Table) -> String {
    let mut out = String::new();
    out.push_str(&table.columns.join(","));
    out.push('\n');
    for row in &table.rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn json_text(data: &Value, echo: &BTreeMap<String, String>) -> String {
    let config: serde_json::Map<String, Value> = echo
        .iter()
        .map(|(k, v)| (k.clone(), Value::String(v.clone())))
        .collect();
    let doc = json!({
        "meta": {
            "version": env!("CARGO_PKG_VERSION"),
            "config": config,
        },
        "data": data,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("serializable document");
    text.push('\n');
    text
}

/// Joins a relative `--out` path to `OUTPUT_DIR` when that variable is set;
/// absolute paths and unset environments pass through.
fn resolve_out(path: &str) -> PathBuf {
    let p = PathBuf::from(path);
    if p.is_relative() {
        if let Ok(dir) = std::env::var("OUTPUT_DIR") {
            if !dir.is_empty() {
                return PathBuf::from(dir).join(p);
            }
        }
    }
    p
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), String> {
    std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

/// Writes the run's artifacts to `--out` or stdout.
pub fn write_output(
    output: &RunOutput,
    format: Format,
    out: Option<String>,
    echo: &BTreeMap<String, String>,
) -> Result<(), String> {
    match (format, out) {
        (Format::Csv, None) => print!("{}", csv_text(&output.table)),
        (Format::Json, None) => print!("{}", json_text(&output.data, echo)),
        (Format::Both, None) => {
            return Err("format 'both' writes two files and needs --out".into())
        }
        (Format::Csv, Some(path)) => write_file(&resolve_out(&path), &csv_text(&output.table))?,
        (Format::Json, Some(path)) => {
            write_file(&resolve_out(&path), &json_text(&output.data, echo))?
        }
        (Format::Both, Some(path)) => {
            let base = resolve_out(&path);
            let mut csv_path = base.clone().into_os_string();
            csv_path.push(".csv");
            let mut json_path = base.into_os_string();
            json_path.push(".json");
            write_file(&csv_path.into(), &csv_text(&output.table))?;
            write_file(&json_path.into(), &json_text(&output.data, echo))?;
        }
    }
    Ok(())
}
