//! CSV tables with a JSON metadata sidecar.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

pub const TOOL: &str = "anticross";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// A numeric table; cells are written with the shortest round-trip
/// representation and non-finite values as `nan`.
#[derive(Debug, Clone)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Experiment-specific metadata for the sidecar.
    pub extra: Value,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(usize),
    Text(String),
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Num(v) if v.is_finite() => format_number(*v),
            Cell::Num(_) => "nan".into(),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

/// Shortest round-trip digits; scientific notation outside `[1e-4, 1e16)`.
fn format_number(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-4..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        v.to_string()
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.into())
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(v.to_string())
    }
}

impl Table {
    pub fn new(name: &str, header: Vec<String>) -> Self {
        Self {
            name: name.into(),
            header,
            rows: Vec::new(),
            extra: Value::Null,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len(), "{}", self.name);
        self.rows.push(row);
    }

    pub fn file_name(&self) -> String {
        format!("{}.csv", self.name)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CsvArtifact {
    pub path: PathBuf,
    pub sidecar: PathBuf,
    pub rows: usize,
    pub columns: usize,
}

/// Writes `<name>.csv` and `<name>.json` into `dir`.
pub fn write_table<S: Serialize>(
    dir: &Path,
    table: &Table,
    experiment: &str,
    instance: &S,
    settings: &Value,
) -> Result<CsvArtifact> {
    let columns = table.header.len();
    if let Some(bad) = table.rows.iter().position(|r| r.len() != columns) {
        bail!("{}: row {bad} has the wrong number of columns", table.name);
    }
    let path = dir.join(table.file_name());
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(&path)
        .with_context(|| format!("creating {}", path.display()))?;
    w.write_record(&table.header)?;
    for row in &table.rows {
        w.write_record(row.iter().map(Cell::render))?;
    }
    w.flush()
        .with_context(|| format!("writing {}", path.display()))?;

    let created = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let meta = json!({
        "artifact": table.file_name(),
        "experiment": experiment,
        "tool": TOOL,
        "version": VERSION,
        "created_unix_seconds": created,
        "instance": instance,
        "settings": settings,
        "columns": table.header,
        "rows": table.rows.len(),
        "units": "energies and fields in units of w; t dimensionless",
        "extra": table.extra,
    });
    let sidecar = dir.join(format!("{}.json", table.name));
    std::fs::write(&sidecar, serde_json::to_string_pretty(&meta)? + "\n")
        .with_context(|| format!("writing {}", sidecar.display()))?;
    Ok(CsvArtifact {
        path,
        sidecar,
        rows: table.rows.len(),
        columns,
    })
}
