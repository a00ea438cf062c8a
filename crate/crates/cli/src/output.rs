//! Tables written as CSV or JSON, and the run manifest.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::config::{ExperimentConfig, Format};
use crate::error::CliError;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    UInt(u64),
    Real(f64),
    /// Exact decimal or rational, kept as text.
    Exact(String),
    Text(String),
    Bool(bool),
    Empty,
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::UInt(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

/// `%.17g`: 17 significant digits, trailing zeros removed.
pub fn fmt_real(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.16e}", x);
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        let s = format!("{:.*}", decimals, x);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let mant = if mant.contains('.') { mant.trim_end_matches('0').trim_end_matches('.') } else { mant };
        format!("{mant}e{exp}")
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::UInt(v) => v.to_string(),
            Cell::Real(v) => fmt_real(*v),
            Cell::Exact(s) | Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::UInt(v) => json!(v),
            Cell::Real(v) if v.is_finite() => json!(v),
            Cell::Real(v) => json!(v.to_string()),
            Cell::Exact(s) | Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
            Cell::Empty => Value::Null,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, cfg: &ExperimentConfig) -> Result<Vec<u8>, CliError> {
        match cfg.format {
            Format::Csv => {
                let mut buf = Vec::new();
                for line in cfg.echo() {
                    writeln!(buf, "# {line}")?;
                }
                let mut w = csv::Writer::from_writer(buf);
                w.write_record(&self.columns)?;
                for r in &self.rows {
                    w.write_record(r.iter().map(Cell::csv))?;
                }
                w.into_inner().map_err(|e| CliError::Io(e.to_string()))
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        let obj: Map<String, Value> =
                            self.columns.iter().cloned().zip(r.iter().map(Cell::json)).collect();
                        Value::Object(obj)
                    })
                    .collect();
                let doc = json!({ "config": cfg, "rows": rows });
                let mut s = serde_json::to_vec_pretty(&doc).map_err(|e| CliError::Io(e.to_string()))?;
                s.push(b'\n');
                Ok(s)
            }
        }
    }
}

#[derive(Serialize)]
pub struct RunManifest<'a> {
    pub config: &'a ExperimentConfig,
    pub version: &'static str,
    pub replica_seeds: Vec<u64>,
    pub wall_clock_seconds: f64,
    pub rows: usize,
    pub data_file: String,
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let mut tmp: PathBuf = path.to_path_buf();
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    tmp.set_file_name(format!(".{name}.tmp{}", std::process::id()));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut p = out.as_os_str().to_owned();
    p.push(".manifest.json");
    PathBuf::from(p)
}

/// Writes the table to `cfg.out` with its manifest, or to stdout.
pub fn emit(table: &Table, cfg: &ExperimentConfig, seeds: Vec<u64>, seconds: f64) -> Result<(), CliError> {
    let bytes = table.render(cfg)?;
    match &cfg.out {
        None => {
            std::io::stdout().write_all(&bytes)?;
        }
        Some(path) => {
            write_atomic(path, &bytes)?;
            let m = RunManifest {
                config: cfg,
                version: env!("CARGO_PKG_VERSION"),
                replica_seeds: seeds,
                wall_clock_seconds: seconds,
                rows: table.rows.len(),
                data_file: path.display().to_string(),
            };
            let mut s = serde_json::to_vec_pretty(&m).map_err(|e| CliError::Io(e.to_string()))?;
            s.push(b'\n');
            write_atomic(&manifest_path(path), &s)?;
        }
    }
    Ok(())
}
