//! Plain-text orthogonal array files.
//!
//! One run per line, whitespace-separated 1-based symbols, `#` comments. An
//! optional first line `n k s r` or `n k s1 .. sk r` declares the shape; it is
//! recognized when its first two values match the data. Without it each
//! column's level count is its largest symbol and the strength defaults to 2.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

use super::{verify_strength, OrthogonalArray};

const DEFAULT_STRENGTH: usize = 2;

/// Parses an array and verifies its declared strength.
pub fn parse_oa(text: &str) -> Result<OrthogonalArray> {
    let mut lines: Vec<(usize, Vec<usize>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let values = content
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>().map_err(|_| Error::Parse {
                    line: idx + 1,
                    message: format!("'{tok}' is not a non-negative integer"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        lines.push((idx + 1, values));
    }
    if lines.is_empty() {
        return Err(Error::Parse {
            line: 0,
            message: "no rows".into(),
        });
    }

    let header = detect_header(&lines);
    let data = if header.is_some() {
        &lines[1..]
    } else {
        &lines[..]
    };
    let k = data[0].1.len();
    for (line, row) in data {
        if row.len() != k {
            return Err(Error::Parse {
                line: *line,
                message: format!("{} symbols, expected {k}", row.len()),
            });
        }
        if row.contains(&0) {
            return Err(Error::Parse {
                line: *line,
                message: "symbols are 1-based".into(),
            });
        }
    }
    let rows: Vec<Vec<usize>> = data.iter().map(|(_, r)| r.clone()).collect();
    let (levels, strength) = match header {
        Some((levels, strength)) => (levels, strength),
        None => {
            let levels = (0..k)
                .map(|j| rows.iter().map(|r| r[j]).max().unwrap_or(1))
                .collect();
            (levels, DEFAULT_STRENGTH.min(k))
        }
    };
    let array = OrthogonalArray::new(Matrix::from_rows(&rows)?, levels, strength).map_err(|e| {
        Error::Parse {
            line: data[0].0,
            message: e.to_string(),
        }
    })?;
    let report = verify_strength(&array, strength);
    match report.witness {
        Some(w) => Err(Error::StrengthViolation(w.to_string())),
        None => Ok(array),
    }
}

/// `(levels, strength)` from a header line, if the first line is one.
fn detect_header(lines: &[(usize, Vec<usize>)]) -> Option<(Vec<usize>, usize)> {
    let first = &lines[0].1;
    let rest = &lines[1..];
    if first.len() < 4 || rest.is_empty() {
        return None;
    }
    let k = rest[0].1.len();
    if first[0] != rest.len() || first[1] != k {
        return None;
    }
    let strength = *first.last()?;
    match first.len() - 3 {
        1 => Some((vec![first[2]; k], strength)),
        m if m == k => Some((first[2..2 + k].to_vec(), strength)),
        _ => None,
    }
}

pub fn load_oa(path: &Path) -> Result<OrthogonalArray> {
    parse_oa(&fs::read_to_string(path)?)
}

/// Writes an array with its header line.
pub fn oa_to_text(array: &OrthogonalArray) -> String {
    let levels = match array.symmetric_levels() {
        Some(s) => s.to_string(),
        None => array
            .levels()
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" "),
    };
    let mut out = format!(
        "{} {} {} {}\n",
        array.rows(),
        array.cols(),
        levels,
        array.strength()
    );
    for i in 0..array.rows() {
        let row: Vec<String> = (0..array.cols())
            .map(|j| array.symbol(i, j).to_string())
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
