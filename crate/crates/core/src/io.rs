//! CSV serialization of level and unit-cube designs.
//!
//! Files carry a `col1,...,colk` header and one row per run. Level files hold
//! true levels (integers or halves); unit-cube files hold 17 significant
//! digits so every value round-trips exactly.

use std::fs;
use std::path::Path;

use crate::design::{DesignMatrix, LevelMatrix};
use crate::error::{Error, Result};
use crate::matrix::RealMatrix;

/// Parses a numeric CSV. A first row that does not parse as numbers is taken
/// as the header. Blank lines and `#` comments are skipped.
pub fn parse_matrix_csv(text: &str) -> Result<RealMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut first = true;
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> =
            record.iter().map(|f| f.parse::<f64>()).collect();
        match parsed {
            Ok(values) => {
                if let Some(prev) = rows.first() {
                    if prev.len() != values.len() {
                        return Err(Error::Parse {
                            line,
                            message: format!("{} fields, expected {}", values.len(), prev.len()),
                        });
                    }
                }
                if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
                    return Err(Error::Parse {
                        line,
                        message: format!("non-finite value {bad}"),
                    });
                }
                rows.push(values);
            }
            Err(_) if first => {}
            Err(e) => {
                return Err(Error::Parse {
                    line,
                    message: e.to_string(),
                })
            }
        }
        first = false;
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 0,
            message: "no data rows".into(),
        });
    }
    RealMatrix::from_rows(&rows)
}

pub fn read_matrix_csv(path: &Path) -> Result<RealMatrix> {
    parse_matrix_csv(&fs::read_to_string(path)?)
}

/// True when the values look like centered levels rather than unit-cube points:
/// all are multiples of one half and at least one is negative or at least 1.
pub fn looks_like_levels(m: &RealMatrix) -> bool {
    let halves = m
        .as_slice()
        .iter()
        .all(|v| (2.0 * v - (2.0 * v).round()).abs() < 1e-9);
    halves && m.as_slice().iter().any(|&v| !(0.0..1.0).contains(&v))
}

pub fn read_levels_csv(path: &Path, levels: Option<usize>) -> Result<LevelMatrix> {
    LevelMatrix::from_true_levels(&read_matrix_csv(path)?, levels)
}

pub fn read_design_csv(path: &Path) -> Result<DesignMatrix> {
    DesignMatrix::new(read_matrix_csv(path)?)
}

fn header(cols: usize) -> String {
    (1..=cols)
        .map(|j| format!("col{j}"))
        .collect::<Vec<_>>()
        .join(",")
}

/// A doubled level written as its true value: `3`, `-1.5`.
pub fn format_doubled_level(doubled: i64) -> String {
    if doubled % 2 == 0 {
        (doubled / 2).to_string()
    } else {
        let sign = if doubled < 0 { "-" } else { "" };
        format!("{sign}{}.5", doubled.abs() / 2)
    }
}

/// Positional decimal with 17 significant digits.
pub fn format_real(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.16e}", v);
    let exponent: i32 = sci[sci.find('e').map_or(0, |p| p + 1)..]
        .parse()
        .unwrap_or(0);
    let decimals = (16 - exponent).max(0) as usize;
    format!("{v:.decimals$}")
}

pub fn levels_to_csv(design: &LevelMatrix) -> String {
    let mut out = header(design.cols());
    out.push('\n');
    for i in 0..design.rows() {
        let row: Vec<String> = design
            .doubled()
            .row(i)
            .iter()
            .map(|&d| format_doubled_level(d))
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn reals_to_csv(m: &RealMatrix) -> String {
    let mut out = header(m.cols());
    out.push('\n');
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|&v| format_real(v)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn write_levels_csv(path: &Path, design: &LevelMatrix) -> Result<()> {
    fs::write(path, levels_to_csv(design))?;
    Ok(())
}

pub fn write_reals_csv(path: &Path, m: &RealMatrix) -> Result<()> {
    fs::write(path, reals_to_csv(m))?;
    Ok(())
}
