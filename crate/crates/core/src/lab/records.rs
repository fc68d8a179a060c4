//! CSV and JSON persistence.
//!
//! Trajectory files start with the line `# inls-lab records v1`, then a
//! comment line of `key=value` run metadata, then a CSV header with the
//! columns of [`DiagnosticsRecord::COLUMNS`] in that order. Numbers are
//! written in shortest round-trip exponent form, so identical runs give
//! identical files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::error::RunError;
use super::summary::ExperimentSummary;
use crate::diagnostics::DiagnosticsRecord;

pub const RECORDS_HEADER: &str = "# inls-lab records v1";

fn create(path: &Path) -> Result<BufWriter<File>, RunError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| RunError::io(dir, e))?;
    }
    Ok(BufWriter::new(File::create(path).map_err(|e| RunError::io(path, e))?))
}

fn number(x: f64) -> String {
    format!("{x:e}")
}

/// Writes a versioned CSV table: `header`, a metadata comment, column names, rows.
pub fn write_table(
    path: &Path,
    header: &str,
    meta: &[(&str, String)],
    columns: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<(), RunError> {
    let mut out = create(path)?;
    let meta_line: Vec<String> = meta.iter().map(|(k, v)| format!("{k}={v}")).collect();
    writeln!(out, "{header}").map_err(|e| RunError::io(path, e))?;
    writeln!(out, "# {}", meta_line.join(" ")).map_err(|e| RunError::io(path, e))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(columns)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| RunError::io(path, e))?;
    Ok(())
}

pub fn write_records(path: &Path, meta: &[(&str, String)], records: &[DiagnosticsRecord]) -> Result<(), RunError> {
    let rows = records.iter().map(|r| r.values().iter().map(|v| number(*v)).collect());
    write_table(path, RECORDS_HEADER, meta, &DiagnosticsRecord::COLUMNS, rows)
}

pub fn read_records(path: &Path) -> Result<Vec<DiagnosticsRecord>, RunError> {
    let file = File::open(path).map_err(|e| RunError::io(path, e))?;
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(file);
    let mut out = Vec::new();
    for row in r.records() {
        let row = row?;
        let v: Vec<f64> = row
            .iter()
            .map(|s| s.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| RunError::io(path, std::io::Error::new(std::io::ErrorKind::InvalidData, e)))?;
        if v.len() != DiagnosticsRecord::COLUMNS.len() {
            return Err(RunError::io(path, std::io::Error::new(std::io::ErrorKind::InvalidData, "wrong column count")));
        }
        out.push(DiagnosticsRecord {
            t: v[0],
            mass: v[1],
            energy: v[2],
            kinetic: v[3],
            potential: v[4],
            virial: v[5],
            virial_rate: v[6],
            l10: v[7],
            grad_l30_11: v[8],
            tail_fraction: v[9],
            deviation: v[10],
        });
    }
    Ok(out)
}

pub fn write_summary(path: &Path, summary: &ExperimentSummary) -> Result<(), RunError> {
    let mut out = create(path)?;
    serde_json::to_writer_pretty(&mut out, summary)?;
    writeln!(out).map_err(|e| RunError::io(path, e))?;
    out.flush().map_err(|e| RunError::io(path, e))
}

pub fn read_summary(path: &Path) -> Result<ExperimentSummary, RunError> {
    let text = std::fs::read_to_string(path).map_err(|e| RunError::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}
