//! Dataset CSV reading and writing.
//!
//! The format is deliberately minimal: a literal `x,y` header and one
//! point per row, decimal-point floats. Writing uses the shortest
//! round-trip representation, so a written file parses back into exactly
//! the same bits.

use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use rotadapt::PointSet;

/// Reads a dataset CSV; errors name the file and the offending row.
pub fn read_points_csv(path: &Path) -> Result<PointSet> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("opening {}", path.display()))?;

    {
        let headers = reader
            .headers()
            .with_context(|| format!("{}: reading header", path.display()))?;
        if headers.len() != 2 || &headers[0] != "x" || &headers[1] != "y" {
            bail!(
                "{}: expected header `x,y`, found `{}`",
                path.display(),
                headers.iter().collect::<Vec<_>>().join(",")
            );
        }
    }

    let mut pairs = Vec::new();
    for record in reader.records() {
        let record = record.with_context(|| format!("{}: malformed record", path.display()))?;
        // Line 1 is the header, so data rows start at line 2.
        let line = record
            .position()
            .map(|p| p.line())
            .unwrap_or(pairs.len() as u64 + 2);
        if record.len() != 2 {
            bail!(
                "{}: row at line {line}: expected 2 fields, found {}",
                path.display(),
                record.len()
            );
        }
        let parse = |field: &str, name: &str| -> Result<f64> {
            field.parse::<f64>().map_err(|_| {
                anyhow!(
                    "{}: row at line {line}: invalid {name} value `{field}`",
                    path.display()
                )
            })
        };
        pairs.push((parse(&record[0], "x")?, parse(&record[1], "y")?));
    }

    PointSet::from_pairs(&pairs).map_err(|e| anyhow!("{}: {e}", path.display()))
}

/// Writes a dataset CSV with the `x,y` header.
pub fn write_points_csv(mut out: impl Write, points: &PointSet) -> Result<()> {
    writeln!(out, "x,y")?;
    for p in points.iter() {
        writeln!(out, "{},{}", p.x, p.y)?;
    }
    Ok(())
}
