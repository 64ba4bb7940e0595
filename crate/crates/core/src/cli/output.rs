//! CSV and manifest writers.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

/// A cell of a CSV row.
pub enum Cell {
    F(f64),
    I(usize),
    S(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::F(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::I(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::S(v.to_string())
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::F)
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::F(v) => fmt_f64(*v),
            Cell::I(v) => v.to_string(),
            Cell::S(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

/// Writes a header and rows with `\n` line endings.
pub fn write_csv(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<Cell>>) -> Result<()> {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    let io = |e: csv::Error| Error::Parse(e.to_string());
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(row.iter().map(Cell::render)).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    fs::write(path, bytes)?;
    Ok(())
}

/// Reads the last column of a CSV file as numbers. A non-numeric first
/// row is taken as a header.
pub fn read_values(path: &Path) -> Result<Vec<f64>> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let Some(last) = rec.iter().next_back() else { continue };
        match last.parse::<f64>() {
            Ok(v) if v.is_finite() => out.push(v),
            _ if line == 0 => {}
            _ => {
                return Err(Error::Parse(format!(
                    "{}: line {}: '{last}' is not a finite number",
                    path.display(),
                    line + 1
                )))
            }
        }
    }
    if out.len() < 2 {
        return Err(Error::Parse(format!("{}: need at least two values", path.display())));
    }
    Ok(out)
}

/// Provenance record written once per artifact directory.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub args: Vec<String>,
    pub flags: serde_json::Value,
    pub seed: u64,
    pub prng: &'static str,
    pub threads: Option<usize>,
    pub versions: Versions,
    pub outputs: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Versions {
    pub enonet: &'static str,
    pub manifest: u32,
}

pub const MANIFEST_NAME: &str = "manifest.json";

impl RunManifest {
    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(MANIFEST_NAME);
        let mut f = fs::File::create(&path)?;
        serde_json::to_writer_pretty(&mut f, self)?;
        f.write_all(b"\n")?;
        Ok(path)
    }
}

pub fn versions() -> Versions {
    Versions {
        enonet: env!("CARGO_PKG_VERSION"),
        manifest: 1,
    }
}
