use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::diagnostics::SCHEMA_VERSION;
use crate::error::{Error, Result};

const VERSION_PREFIX: &str = "# schema_version=";

/// Formats a value with 17 significant digits.
pub fn fmt_value(v: f64) -> String {
    format!("{v:.16e}")
}

/// Renders a series table: a `# schema_version=N` line, a header row, then
/// one row per sample.
pub fn render_csv(names: &[String], rows: &[Vec<f64>]) -> String {
    let mut out = format!("{VERSION_PREFIX}{SCHEMA_VERSION}\n{}\n", names.join(","));
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| fmt_value(*v)).collect();
        writeln!(out, "{}", cells.join(",")).unwrap();
    }
    out
}

pub fn write_csv(path: &Path, names: &[String], rows: &[Vec<f64>]) -> Result<()> {
    fs::write(path, render_csv(names, rows))?;
    Ok(())
}

/// A series table read back from disk.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesTable {
    pub schema_version: u32,
    pub names: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl SeriesTable {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let first = lines.next().ok_or_else(|| Error::Schema("empty series file".into()))?;
        let version: u32 = first
            .strip_prefix(VERSION_PREFIX)
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| Error::Schema(format!("missing `{VERSION_PREFIX}` line")))?;
        if version != SCHEMA_VERSION {
            return Err(Error::Schema(format!(
                "schema version {version}, this build reads {SCHEMA_VERSION}"
            )));
        }
        let header = lines.next().ok_or_else(|| Error::Schema("missing header row".into()))?;
        let names: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let row = line
                .split(',')
                .map(|c| c.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Schema(format!("row {}: {e}", i + 1)))?;
            if row.len() != names.len() {
                return Err(Error::Schema(format!(
                    "row {} has {} cells for {} columns",
                    i + 1,
                    row.len(),
                    names.len()
                )));
            }
            rows.push(row);
        }
        Ok(Self { schema_version: version, names, rows })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Schema(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let i = self
            .names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::Schema(format!("no column `{name}`")))?;
        Ok(self.rows.iter().map(|r| r[i]).collect())
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn read_json(path: &Path) -> Result<serde_json::Value> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Schema(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))
}
