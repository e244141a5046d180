//! CSV tables for studies: rate tables, consistency deviations and
//! Monte Carlo error tables.  Headers are stable; floats use full
//! round-trip formatting.

use std::path::Path;

use crate::analysis::{McStudy, RateStudy};

use super::IoError;

/// One parsed row of a rate CSV (used by the report command).
#[derive(Debug, Clone, PartialEq)]
pub struct RateCsvRow {
    pub n: usize,
    pub encoded_len: usize,
    pub block: String,
    pub test_fn: String,
    pub error: f64,
}

/// Columns: `n,N,block,test_fn,error` with `N` the total encoded length.
pub fn write_rate_csv(study: &RateStudy, path: &Path) -> Result<(), IoError> {
    let mut out = String::from("n,N,block,test_fn,error\n");
    for row in &study.rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.n,
            row.encoded_len,
            row.block.name(),
            row.test_fn,
            row.error
        ));
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Parses a rate CSV written by [`write_rate_csv`].
pub fn read_rate_csv(path: &Path) -> Result<Vec<RateCsvRow>, IoError> {
    let text = std::fs::read_to_string(path)?;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if lineno == 0 {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let parse_err = |message: String| IoError::Parse {
            path: path.display().to_string(),
            line: lineno + 1,
            message,
        };
        if fields.len() != 5 {
            return Err(parse_err(format!("expected 5 columns, got {}", fields.len())));
        }
        rows.push(RateCsvRow {
            n: fields[0].parse().map_err(|e| parse_err(format!("{e}")))?,
            encoded_len: fields[1].parse().map_err(|e| parse_err(format!("{e}")))?,
            block: fields[2].to_string(),
            test_fn: fields[3].to_string(),
            error: fields[4].parse().map_err(|e| parse_err(format!("{e}")))?,
        });
    }
    Ok(rows)
}

/// Columns: `radius,deviation`.
pub fn write_consistency_csv(
    radii: &[f64],
    deviations: &[f64],
    path: &Path,
) -> Result<(), IoError> {
    let mut out = String::from("radius,deviation\n");
    for (r, d) in radii.iter().zip(deviations) {
        out.push_str(&format!("{r},{d}\n"));
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Columns: `N,rms_measure,rms_function,rms_max`.
pub fn write_mc_csv(study: &McStudy, path: &Path) -> Result<(), IoError> {
    let mut out = String::from("N,rms_measure,rms_function,rms_max\n");
    for row in &study.rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            row.samples, row.rms_measure, row.rms_function, row.rms_max
        ));
    }
    std::fs::write(path, out)?;
    Ok(())
}
