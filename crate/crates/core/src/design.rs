//! Latin hypercubes, s-level designs and their unit-cube realizations.
//!
//! A [`LevelMatrix`] keeps centered levels `-(s-1)/2, ..., (s-1)/2` as
//! *doubled* integers, so half-integer levels of even-sized designs are exact
//! and all construction algebra stays in integer arithmetic.

use std::collections::BTreeMap;
use std::ops::Deref;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, RealMatrix};
use crate::rng;

/// Exact integer representation of an `n x k` design on `s` centered levels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelMatrix {
    doubled: IntMatrix,
    levels: usize,
}

impl LevelMatrix {
    /// Wraps doubled levels. Only the shape is checked here; level membership
    /// and balance are reported by [`validate_levels`].
    pub fn from_doubled(doubled: IntMatrix, levels: usize) -> Result<Self> {
        let n = doubled.rows();
        if n == 0 || doubled.cols() == 0 {
            return Err(Error::InvalidDimension(format!(
                "{}x{} level matrix",
                n,
                doubled.cols()
            )));
        }
        if levels == 0 || levels > n || !n.is_multiple_of(levels) {
            return Err(Error::InvalidDimension(format!(
                "{levels} levels do not divide {n} runs"
            )));
        }
        Ok(Self { doubled, levels })
    }

    /// A Latin hypercube (`s = n`) from doubled levels.
    pub fn latin_from_doubled(doubled: IntMatrix) -> Result<Self> {
        let n = doubled.rows();
        Self::from_doubled(doubled, n)
    }

    /// A Latin hypercube from integer levels, as printed for odd run sizes.
    pub fn latin_from_integers<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let m = IntMatrix::from_rows(rows)?;
        Self::latin_from_doubled(m.scale(2))
    }

    /// Parses true (integer or half-integer) levels. `levels` defaults to the
    /// smallest level count consistent with the largest absolute entry.
    pub fn from_true_levels(values: &RealMatrix, levels: Option<usize>) -> Result<Self> {
        let mut max_abs = 0_i64;
        let doubled = IntMatrix::new(
            values.rows(),
            values.cols(),
            values
                .as_slice()
                .iter()
                .enumerate()
                .map(|(idx, &v)| {
                    let d = 2.0 * v;
                    if !d.is_finite() || (d - d.round()).abs() > 1e-9 {
                        return Err(Error::InvalidLevel {
                            row: idx / values.cols(),
                            col: idx % values.cols(),
                            value: v,
                            levels: levels.unwrap_or(values.rows()),
                        });
                    }
                    let d = d.round() as i64;
                    max_abs = max_abs.max(d.abs());
                    Ok(d)
                })
                .collect::<Result<Vec<_>>>()?,
        )?;
        let s = levels.unwrap_or(max_abs as usize + 1);
        Self::from_doubled(doubled, s)
    }

    pub fn rows(&self) -> usize {
        self.doubled.rows()
    }

    pub fn cols(&self) -> usize {
        self.doubled.cols()
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn is_latin_shape(&self) -> bool {
        self.levels == self.rows()
    }

    pub fn doubled(&self) -> &IntMatrix {
        &self.doubled
    }

    pub fn into_doubled(self) -> IntMatrix {
        self.doubled
    }

    pub fn doubled_at(&self, row: usize, col: usize) -> i64 {
        self.doubled.get(row, col)
    }

    pub fn level_at(&self, row: usize, col: usize) -> f64 {
        self.doubled.get(row, col) as f64 / 2.0
    }

    /// True levels as reals.
    pub fn true_levels(&self) -> RealMatrix {
        self.doubled.map(|v| v as f64 / 2.0)
    }

    /// Zero-based rank `l + (s-1)/2` of an entry, if it is a valid level.
    pub fn rank_at(&self, row: usize, col: usize) -> Option<usize> {
        level_rank(self.doubled.get(row, col), self.levels)
    }

    pub fn select_columns(&self, indices: &[usize]) -> Result<Self> {
        Self::from_doubled(self.doubled.select_columns(indices)?, self.levels)
    }

    pub fn hstack(parts: &[&Self]) -> Result<Self> {
        let levels = parts.first().map_or(0, |p| p.levels);
        if parts.iter().any(|p| p.levels != levels) {
            return Err(Error::ShapeMismatch(
                "hstack of different level counts".into(),
            ));
        }
        let inner: Vec<&IntMatrix> = parts.iter().map(|p| &p.doubled).collect();
        Self::from_doubled(IntMatrix::hstack(&inner)?, levels)
    }

    /// 1-based symbols `1..=s` in level order, the usual U-type notation.
    pub fn to_symbols(&self) -> Result<Vec<Vec<usize>>> {
        (0..self.rows())
            .map(|i| {
                (0..self.cols())
                    .map(|j| {
                        self.rank_at(i, j)
                            .map(|r| r + 1)
                            .ok_or(Error::InvalidLevel {
                                row: i,
                                col: j,
                                value: self.level_at(i, j),
                                levels: self.levels,
                            })
                    })
                    .collect()
            })
            .collect()
    }
}

/// Doubled level set `{-(s-1), -(s-3), ..., s-1}`.
pub fn doubled_level_set(levels: usize) -> Vec<i64> {
    let s = levels as i64;
    (0..s).map(|r| 2 * r - (s - 1)).collect()
}

pub(crate) fn level_rank(doubled: i64, levels: usize) -> Option<usize> {
    let shifted = doubled + levels as i64 - 1;
    if shifted < 0 || shifted % 2 != 0 {
        return None;
    }
    let rank = (shifted / 2) as usize;
    (rank < levels).then_some(rank)
}

/// Points in the half-open unit cube `[0,1)^k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignMatrix(RealMatrix);

impl DesignMatrix {
    pub fn new(points: RealMatrix) -> Result<Self> {
        for i in 0..points.rows() {
            for j in 0..points.cols() {
                let v = points.get(i, j);
                if !(0.0..1.0).contains(&v) {
                    return Err(Error::OutOfUnitCube {
                        row: i,
                        col: j,
                        value: v,
                    });
                }
            }
        }
        Ok(Self(points))
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Self::new(RealMatrix::from_rows(rows)?)
    }

    pub fn points(&self) -> &RealMatrix {
        &self.0
    }

    pub fn into_inner(self) -> RealMatrix {
        self.0
    }
}

impl Deref for DesignMatrix {
    type Target = RealMatrix;

    fn deref(&self) -> &RealMatrix {
        &self.0
    }
}

/// How the within-cell offset `u_ij` is chosen when scaling to the unit cube.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum JitterMode {
    /// Independent uniform offsets drawn from the seed.
    Random(u64),
    /// Cell midpoints (`u_ij = 0.5`), the lattice sample.
    Midpoint,
}

/// Random Latin hypercube with independent uniformly permuted columns.
pub fn random_latin_hypercube(n: usize, k: usize, seed: u64) -> Result<LevelMatrix> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidDimension(format!("{n}x{k} Latin hypercube")));
    }
    let levels = doubled_level_set(n);
    let mut doubled = IntMatrix::filled(n, k, 0);
    for j in 0..k {
        let mut rng = rng::stream(seed, j as u64);
        let mut column = levels.clone();
        column.shuffle(&mut rng);
        for (i, v) in column.into_iter().enumerate() {
            doubled.set(i, j, v);
        }
    }
    LevelMatrix::from_doubled(doubled, n)
}

/// Random balanced design with `levels` levels per column (a U-type design).
pub fn random_balanced_design(n: usize, k: usize, levels: usize, seed: u64) -> Result<LevelMatrix> {
    if n == 0 || k == 0 || levels == 0 || !n.is_multiple_of(levels) {
        return Err(Error::InvalidDimension(format!(
            "{n}x{k} design with {levels} levels"
        )));
    }
    let reps = n / levels;
    let base: Vec<i64> = doubled_level_set(levels)
        .into_iter()
        .flat_map(|v| std::iter::repeat_n(v, reps))
        .collect();
    let mut doubled = IntMatrix::filled(n, k, 0);
    for j in 0..k {
        let mut rng = rng::stream(seed, j as u64);
        let mut column = base.clone();
        column.shuffle(&mut rng);
        for (i, v) in column.into_iter().enumerate() {
            doubled.set(i, j, v);
        }
    }
    LevelMatrix::from_doubled(doubled, levels)
}

/// Maps levels to the unit cube: `d = (l + (s-1)/2 + u) / s`.
pub fn to_unit_cube(design: &LevelMatrix, mode: JitterMode) -> Result<DesignMatrix> {
    let s = design.levels();
    let (n, k) = (design.rows(), design.cols());
    let mut jitter = match mode {
        JitterMode::Random(seed) => Some(rng::from_seed(seed)),
        JitterMode::Midpoint => None,
    };
    let below_one = f64::from_bits(1.0_f64.to_bits() - 1);
    let mut out = RealMatrix::filled(n, k, 0.0);
    for i in 0..n {
        for j in 0..k {
            let rank = design.rank_at(i, j).ok_or(Error::InvalidLevel {
                row: i,
                col: j,
                value: design.level_at(i, j),
                levels: s,
            })?;
            let u = match jitter.as_mut() {
                Some(r) => r.gen::<f64>(),
                None => 0.5,
            };
            out.set(i, j, ((rank as f64 + u) / s as f64).min(below_one));
        }
    }
    DesignMatrix::new(out)
}

/// Unit-cube realization with explicit offsets `u_ij`.
pub fn to_unit_cube_with_offsets(
    design: &LevelMatrix,
    offsets: &RealMatrix,
) -> Result<DesignMatrix> {
    if offsets.rows() != design.rows() || offsets.cols() != design.cols() {
        return Err(Error::ShapeMismatch("offset matrix shape".into()));
    }
    let s = design.levels() as f64;
    let mut out = RealMatrix::filled(design.rows(), design.cols(), 0.0);
    for i in 0..design.rows() {
        for j in 0..design.cols() {
            let rank = design.rank_at(i, j).ok_or(Error::InvalidLevel {
                row: i,
                col: j,
                value: design.level_at(i, j),
                levels: design.levels(),
            })?;
            let u = offsets.get(i, j);
            if !(0.0..1.0).contains(&u) {
                return Err(Error::InvalidParameter(format!("offset {u} outside [0,1)")));
            }
            out.set(i, j, (rank as f64 + u) / s);
        }
    }
    DesignMatrix::new(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum LevelIssue {
    NotALevel {
        row: usize,
        value: f64,
    },
    Duplicated {
        level: f64,
        count: usize,
        expected: usize,
    },
    Missing {
        level: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnCheck {
    pub column: usize,
    pub passed: bool,
    pub issues: Vec<LevelIssue>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub levels: usize,
    pub runs: usize,
    /// Set when the matrix is checked as a Latin hypercube but `s != n`.
    pub shape_issue: Option<String>,
    pub columns: Vec<ColumnCheck>,
}

impl ValidationReport {
    pub fn failing_columns(&self) -> impl Iterator<Item = &ColumnCheck> {
        self.columns.iter().filter(|c| !c.passed)
    }
}

/// Per-column balance check: each of the `s` levels appears exactly `n/s` times.
pub fn validate_levels(design: &LevelMatrix) -> ValidationReport {
    let n = design.rows();
    let s = design.levels();
    let expected = n / s;
    let columns = (0..design.cols())
        .map(|j| {
            let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
            let mut issues = Vec::new();
            for i in 0..n {
                let v = design.doubled_at(i, j);
                if level_rank(v, s).is_none() {
                    issues.push(LevelIssue::NotALevel {
                        row: i,
                        value: v as f64 / 2.0,
                    });
                } else {
                    *counts.entry(v).or_default() += 1;
                }
            }
            for level in doubled_level_set(s) {
                match counts.get(&level).copied().unwrap_or(0) {
                    0 => issues.push(LevelIssue::Missing {
                        level: level as f64 / 2.0,
                    }),
                    c if c > expected => issues.push(LevelIssue::Duplicated {
                        level: level as f64 / 2.0,
                        count: c,
                        expected,
                    }),
                    _ => {}
                }
            }
            ColumnCheck {
                column: j,
                passed: issues.is_empty(),
                issues,
            }
        })
        .collect::<Vec<_>>();
    ValidationReport {
        passed: columns.iter().all(|c| c.passed),
        levels: s,
        runs: n,
        shape_issue: None,
        columns,
    }
}

/// Checks that every column is a permutation of the `n` centered levels.
pub fn validate_latin_hypercube(design: &LevelMatrix) -> ValidationReport {
    let mut report = validate_levels(design);
    if !design.is_latin_shape() {
        report.shape_issue = Some(format!(
            "{} levels for {} runs; a Latin hypercube needs one level per run",
            design.levels(),
            design.rows()
        ));
        report.passed = false;
    }
    report
}

/// Default target range of [`gram_schmidt_design`].
pub const GRAM_SCHMIDT_DEFAULT_RANGE: (f64, f64) = (0.0, 1.0);

const DEPENDENCE_TOLERANCE: f64 = 1e-12;

/// Centers, orthogonalizes and rescales the columns of `design` so that every
/// pair of output columns is uncorrelated.
pub fn gram_schmidt_design(design: &RealMatrix, low: f64, high: f64) -> Result<RealMatrix> {
    if !(low < high) {
        return Err(Error::InvalidParameter(format!("range [{low}, {high}]")));
    }
    let (n, k) = (design.rows(), design.cols());
    let centered: Vec<Vec<f64>> = (0..k)
        .map(|j| {
            let col = design.column(j);
            let mean = col.iter().sum::<f64>() / n as f64;
            col.into_iter().map(|v| v - mean).collect()
        })
        .collect();

    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(k);
    for (j, v) in centered.iter().enumerate() {
        let v_norm = dot(v, v).sqrt();
        let mut u = v.clone();
        // two projection passes keep the result orthogonal to rounding level
        for _ in 0..2 {
            for b in &basis {
                let coef = dot(b, &u) / dot(b, b);
                u.iter_mut().zip(b).for_each(|(x, y)| *x -= coef * y);
            }
        }
        let u_norm = dot(&u, &u).sqrt();
        if v_norm == 0.0 || u_norm < DEPENDENCE_TOLERANCE * v_norm {
            return Err(Error::DegenerateInput { column: j });
        }
        basis.push(u);
    }

    let mut out = RealMatrix::filled(n, k, 0.0);
    for (j, u) in basis.iter().enumerate() {
        let lo = u.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = u.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        for (i, &x) in u.iter().enumerate() {
            out.set(i, j, low + (x - lo) / (hi - lo) * (high - low));
        }
    }
    Ok(out)
}
