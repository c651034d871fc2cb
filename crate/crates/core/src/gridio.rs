//! Grid files.
//!
//! JSON: `{dim, n, points: [[…]], pinned: […], meta: {distribution, p, norm}}`.
//! CSV: one point per row, `d` numeric columns, optional header row.
//! Floats are written in shortest round-trip form, so reading a file back
//! reproduces every coordinate bit for bit.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{DqError, Result};
use crate::geometry::{Grid, NormKind};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GridMeta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distribution: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm: Option<NormKind>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct GridFile {
    dim: usize,
    n: usize,
    points: Vec<Vec<f64>>,
    #[serde(default)]
    pinned: Vec<usize>,
    #[serde(default)]
    meta: GridMeta,
}

pub fn to_json(grid: &Grid, meta: &GridMeta) -> Result<String> {
    let file = GridFile {
        dim: grid.dim(),
        n: grid.len(),
        points: grid.points().map(<[f64]>::to_vec).collect(),
        pinned: grid.pinned().iter().copied().collect(),
        meta: meta.clone(),
    };
    serde_json::to_string_pretty(&file).map_err(|e| DqError::Parse(e.to_string()))
}

pub fn from_json(text: &str) -> Result<(Grid, GridMeta)> {
    let file: GridFile = serde_json::from_str(text).map_err(|e| DqError::Parse(e.to_string()))?;
    if file.points.len() != file.n {
        return Err(DqError::Parse(format!("n = {} but {} points listed", file.n, file.points.len())));
    }
    if let Some(bad) = file.points.iter().find(|p| p.len() != file.dim) {
        return Err(DqError::DimensionMismatch { expected: file.dim, got: bad.len() });
    }
    let grid = Grid::new(&file.points)?.with_pinned(file.pinned)?;
    Ok((grid, file.meta))
}

pub fn to_csv(grid: &Grid) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    for p in grid.points() {
        w.write_record(p.iter().map(|v| v.to_string())).map_err(|e| DqError::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| DqError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| DqError::Io(e.to_string()))
}

pub fn from_csv(text: &str) -> Result<Grid> {
    let mut r = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| DqError::Parse(e.to_string()))?;
        let parsed: std::result::Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(v) => rows.push(v),
            Err(_) if line == 0 => continue,
            Err(e) => return Err(DqError::Parse(format!("row {}: {e}", line + 1))),
        }
    }
    if rows.is_empty() {
        return Err(DqError::Parse("no points in CSV".into()));
    }
    Grid::new(&rows)
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

/// Read a grid file; `.json` selects JSON, anything else CSV.
pub fn read_grid(path: &Path) -> Result<(Grid, GridMeta)> {
    let text = fs::read_to_string(path)?;
    if is_json(path) {
        from_json(&text)
    } else {
        Ok((from_csv(&text)?, GridMeta::default()))
    }
}

/// Write a grid file; `.json` selects JSON, anything else CSV (which drops
/// the pinned set and metadata).
pub fn write_grid(path: &Path, grid: &Grid, meta: &GridMeta) -> Result<()> {
    let text = if is_json(path) { to_json(grid, meta)? } else { to_csv(grid)? };
    fs::write(path, text)?;
    Ok(())
}
