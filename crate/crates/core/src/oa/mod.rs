//! Orthogonal arrays: strength verification, OA-based Latin hypercubes and
//! the projection property they inherit.

mod galois;
mod text;

pub use galois::{galois_oa, GaloisField};
pub use text::{load_oa, oa_to_text, parse_oa};

use rand::seq::SliceRandom;
use serde::Serialize;

use crate::design::LevelMatrix;
use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, Matrix};
use crate::rng;

/// An `n x k` array with 1-based symbols, per-column level counts and a
/// declared strength.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrthogonalArray {
    symbols: Matrix<usize>,
    levels: Vec<usize>,
    strength: usize,
}

impl OrthogonalArray {
    /// Checks shape and symbol ranges; strength is verified separately.
    pub fn new(symbols: Matrix<usize>, levels: Vec<usize>, strength: usize) -> Result<Self> {
        if symbols.rows() == 0 || symbols.cols() == 0 {
            return Err(Error::InvalidDimension("empty orthogonal array".into()));
        }
        if levels.len() != symbols.cols() {
            return Err(Error::ShapeMismatch(format!(
                "{} level counts for {} columns",
                levels.len(),
                symbols.cols()
            )));
        }
        for i in 0..symbols.rows() {
            for (j, &s) in levels.iter().enumerate() {
                let v = symbols.get(i, j);
                if v == 0 || v > s {
                    return Err(Error::InvalidParameter(format!(
                        "symbol {v} at row {}, column {} outside 1..={s}",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Self {
            symbols,
            levels,
            strength,
        })
    }

    pub fn symmetric(symbols: Matrix<usize>, levels: usize, strength: usize) -> Result<Self> {
        let k = symbols.cols();
        Self::new(symbols, vec![levels; k], strength)
    }

    /// A Latin hypercube read as an OA(n, n^k, 1).
    pub fn from_latin_hypercube(design: &LevelMatrix) -> Result<Self> {
        let symbols = design.to_symbols()?;
        Self::symmetric(Matrix::from_rows(&symbols)?, design.levels(), 1)
    }

    pub fn rows(&self) -> usize {
        self.symbols.rows()
    }

    pub fn cols(&self) -> usize {
        self.symbols.cols()
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    /// The common level count, if all columns share one.
    pub fn symmetric_levels(&self) -> Option<usize> {
        let s = self.levels[0];
        self.levels.iter().all(|&v| v == s).then_some(s)
    }

    pub fn strength(&self) -> usize {
        self.strength
    }

    pub fn symbol(&self, row: usize, col: usize) -> usize {
        self.symbols.get(row, col)
    }

    pub fn symbols(&self) -> &Matrix<usize> {
        &self.symbols
    }

    pub fn select_columns(&self, indices: &[usize]) -> Result<Self> {
        let levels = indices.iter().map(|&j| self.levels[j]).collect();
        Self::new(self.symbols.select_columns(indices)?, levels, self.strength)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum StrengthWitness {
    TooFewColumns {
        columns: usize,
        strength: usize,
    },
    /// `runs` is not a multiple of the number of level combinations.
    NonIntegralIndex {
        columns: Vec<usize>,
        runs: usize,
        cells: usize,
    },
    /// A level combination (1-based) whose count differs from the index.
    UnequalCount {
        columns: Vec<usize>,
        tuple: Vec<usize>,
        count: usize,
        expected: usize,
    },
}

impl std::fmt::Display for StrengthWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let one_based = |c: &[usize]| c.iter().map(|j| j + 1).collect::<Vec<_>>();
        match self {
            Self::TooFewColumns { columns, strength } => {
                write!(f, "strength {strength} exceeds the {columns} columns")
            }
            Self::NonIntegralIndex {
                columns,
                runs,
                cells,
            } => write!(
                f,
                "columns {:?}: {runs} runs cannot cover {cells} level combinations equally",
                one_based(columns)
            ),
            Self::UnequalCount {
                columns,
                tuple,
                count,
                expected,
            } => write!(
                f,
                "columns {:?}: combination {tuple:?} appears {count} times, expected {expected}",
                one_based(columns)
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrengthReport {
    pub holds: bool,
    pub witness: Option<StrengthWitness>,
}

/// Lexicographic r-subsets of `0..k`.
pub(crate) fn combinations(k: usize, r: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = (r <= k).then(|| (0..r).collect());
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let c = current.as_mut().unwrap();
        let mut i = r;
        loop {
            if i == 0 {
                current = None;
                break;
            }
            i -= 1;
            if c[i] < k - r + i {
                c[i] += 1;
                for t in i + 1..r {
                    c[t] = c[t - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}

/// Counts of each level combination on `columns`, in mixed-radix order with
/// the last column varying fastest.
fn cell_counts(
    rows: usize,
    columns: &[usize],
    radix: &[usize],
    cell: impl Fn(usize, usize) -> usize,
) -> Vec<usize> {
    let total: usize = radix.iter().product();
    let mut counts = vec![0; total];
    for i in 0..rows {
        let idx = columns
            .iter()
            .zip(radix)
            .fold(0, |acc, (&j, &s)| acc * s + cell(i, j));
        counts[idx] += 1;
    }
    counts
}

fn unravel(mut idx: usize, radix: &[usize]) -> Vec<usize> {
    let mut out = vec![0; radix.len()];
    for (slot, &s) in out.iter_mut().zip(radix).rev() {
        *slot = idx % s;
        idx /= s;
    }
    out
}

/// Exhaustive check of strength `r` over every r-column subset.
pub fn verify_strength(array: &OrthogonalArray, r: usize) -> StrengthReport {
    let fail = |w| StrengthReport {
        holds: false,
        witness: Some(w),
    };
    if r > array.cols() {
        return fail(StrengthWitness::TooFewColumns {
            columns: array.cols(),
            strength: r,
        });
    }
    let n = array.rows();
    for columns in combinations(array.cols(), r) {
        let radix: Vec<usize> = columns.iter().map(|&j| array.levels[j]).collect();
        let cells: usize = radix.iter().product();
        if !n.is_multiple_of(cells) {
            return fail(StrengthWitness::NonIntegralIndex {
                columns,
                runs: n,
                cells,
            });
        }
        let expected = n / cells;
        let counts = cell_counts(n, &columns, &radix, |i, j| array.symbol(i, j) - 1);
        if let Some(idx) = counts.iter().position(|&c| c != expected) {
            let tuple = unravel(idx, &radix).into_iter().map(|v| v + 1).collect();
            return fail(StrengthWitness::UnequalCount {
                columns,
                tuple,
                count: counts[idx],
                expected,
            });
        }
    }
    StrengthReport {
        holds: true,
        witness: None,
    }
}

/// OA-based Latin hypercube for an array with a common level count.
pub fn oa_based_lh(array: &OrthogonalArray, seed: u64) -> Result<LevelMatrix> {
    if array.symmetric_levels().is_none() {
        return Err(Error::IncompatibleArray(
            "mixed level counts; use oa_based_lh_asym".into(),
        ));
    }
    oa_based_lh_asym(array, seed)
}

/// OA-based Latin hypercube: in column `j` the `n/s_j` runs holding symbol
/// `m` receive a random permutation of the ranks `(m-1)n/s_j + 1 ..= m n/s_j`.
pub fn oa_based_lh_asym(array: &OrthogonalArray, seed: u64) -> Result<LevelMatrix> {
    let n = array.rows();
    let mut doubled = IntMatrix::filled(n, array.cols(), 0);
    for (j, &s) in array.levels().iter().enumerate() {
        if !n.is_multiple_of(s) {
            return Err(Error::IncompatibleArray(format!(
                "column {} has {s} levels, which do not divide {n} runs",
                j + 1
            )));
        }
        let block = n / s;
        let mut positions = vec![Vec::with_capacity(block); s];
        for i in 0..n {
            positions[array.symbol(i, j) - 1].push(i);
        }
        let mut rng = rng::stream(seed, j as u64);
        for (m, rows) in positions.iter().enumerate() {
            if rows.len() != block {
                return Err(Error::IncompatibleArray(format!(
                    "column {} holds symbol {} {} times, expected {block}",
                    j + 1,
                    m + 1,
                    rows.len()
                )));
            }
            let mut ranks: Vec<i64> = (1..=block as i64)
                .map(|r| m as i64 * block as i64 + r)
                .collect();
            ranks.shuffle(&mut rng);
            for (&i, rank) in rows.iter().zip(ranks) {
                doubled.set(i, j, 2 * rank - (n as i64 + 1));
            }
        }
    }
    LevelMatrix::latin_from_doubled(doubled)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectionReport {
    pub holds: bool,
    pub lambda: usize,
    /// First failing column subset, grid cell (0-based) and its count.
    pub witness: Option<(Vec<usize>, Vec<usize>, usize)>,
}

/// Whether every `r`-column projection of the midpoint-scaled hypercube puts
/// exactly `n / s^r` points in each cell of the `s^r` grid.
pub fn verify_projection_property(
    design: &LevelMatrix,
    s: usize,
    r: usize,
) -> Result<ProjectionReport> {
    let n = design.rows();
    let cells = s.checked_pow(r as u32).unwrap_or(usize::MAX);
    if s == 0 || !n.is_multiple_of(s) || !n.is_multiple_of(cells) {
        return Err(Error::InvalidParameter(format!(
            "{n} runs are not a multiple of {s}^{r}"
        )));
    }
    if r > design.cols() {
        return Err(Error::InvalidParameter(format!(
            "projection dimension {r} exceeds {} columns",
            design.cols()
        )));
    }
    if !design.is_latin_shape() {
        return Err(Error::InvalidParameter(
            "projection check needs a Latin hypercube".into(),
        ));
    }
    let lambda = n / cells;
    let width = n / s;
    let mut cell = Matrix::filled(n, design.cols(), 0_usize);
    for i in 0..n {
        for j in 0..design.cols() {
            let rank = design.rank_at(i, j).ok_or(Error::InvalidLevel {
                row: i,
                col: j,
                value: design.level_at(i, j),
                levels: n,
            })?;
            cell.set(i, j, rank / width);
        }
    }
    let radix = vec![s; r];
    for columns in combinations(design.cols(), r) {
        let counts = cell_counts(n, &columns, &radix, |i, j| cell.get(i, j));
        if let Some(idx) = counts.iter().position(|&c| c != lambda) {
            return Ok(ProjectionReport {
                holds: false,
                lambda,
                witness: Some((columns, unravel(idx, &radix), counts[idx])),
            });
        }
    }
    Ok(ProjectionReport {
        holds: true,
        lambda,
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{random_latin_hypercube, validate_latin_hypercube};

    pub(crate) fn oa_9_3_4() -> OrthogonalArray {
        let rows: Vec<Vec<usize>> = [
            "1111", "1223", "1332", "2122", "2231", "2313", "3133", "3212", "3321",
        ]
        .iter()
        .map(|r| r.bytes().map(|b| (b - b'0') as usize).collect())
        .collect();
        OrthogonalArray::symmetric(Matrix::from_rows(&rows).unwrap(), 3, 2).unwrap()
    }

    fn printed_lh_9x4() -> LevelMatrix {
        LevelMatrix::latin_from_integers(&[
            [-2, -2, -4, -2],
            [-4, 0, 1, 2],
            [-3, 4, 2, 1],
            [-1, -4, -1, -1],
            [1, -1, 4, -3],
            [0, 2, -3, 4],
            [3, -3, 3, 3],
            [2, 1, -2, 0],
            [4, 3, 0, -4],
        ])
        .unwrap()
    }

    #[test]
    fn combinations_are_lexicographic() {
        let c: Vec<_> = combinations(4, 2).collect();
        assert_eq!(
            c,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(combinations(3, 0).count(), 1);
        assert_eq!(combinations(2, 3).count(), 0);
    }

    #[test]
    fn nine_run_array_strength() {
        let oa = oa_9_3_4();
        assert!(verify_strength(&oa, 2).holds);
        assert!(verify_strength(&oa, 1).holds);
        let three = verify_strength(&oa, 3);
        assert!(!three.holds);
        assert!(matches!(
            three.witness,
            Some(StrengthWitness::NonIntegralIndex { cells: 27, .. })
        ));
        assert!(!verify_strength(&oa, 5).holds);
    }

    #[test]
    fn mutation_yields_witness() {
        let oa = oa_9_3_4();
        let mut symbols = oa.symbols().clone();
        symbols.set(0, 1, 2);
        let bad = OrthogonalArray::symmetric(symbols, 3, 2).unwrap();
        let report = verify_strength(&bad, 2);
        assert!(!report.holds);
        match report.witness.unwrap() {
            StrengthWitness::UnequalCount {
                count, expected, ..
            } => {
                assert_ne!(count, expected);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn latin_hypercube_is_strength_one() {
        let l = random_latin_hypercube(7, 3, 1).unwrap();
        let oa = OrthogonalArray::from_latin_hypercube(&l).unwrap();
        assert!(verify_strength(&oa, 1).holds);
    }

    #[test]
    fn printed_lh_lies_in_symbol_blocks() {
        let oa = oa_9_3_4();
        let l = printed_lh_9x4();
        for i in 0..9 {
            for j in 0..4 {
                let rank = l.level_at(i, j) as i64 + 5;
                let m = oa.symbol(i, j) as i64;
                assert!(((m - 1) * 3 + 1..=3 * m).contains(&rank), "row {i} col {j}");
            }
        }
        assert!(validate_latin_hypercube(&l).passed);
        assert!(verify_projection_property(&l, 3, 2).unwrap().holds);
    }

    #[test]
    fn oa_lh_recovers_blocks_and_projections() {
        let oa = oa_9_3_4();
        for seed in 0..20 {
            let l = oa_based_lh(&oa, seed).unwrap();
            assert!(validate_latin_hypercube(&l).passed);
            assert!(verify_projection_property(&l, 3, 2).unwrap().holds);
            for i in 0..9 {
                for j in 0..4 {
                    let rank = l.rank_at(i, j).unwrap();
                    assert_eq!(rank / 3 + 1, oa.symbol(i, j));
                }
            }
        }
        assert_eq!(oa_based_lh(&oa, 4).unwrap(), oa_based_lh(&oa, 4).unwrap());
    }

    #[test]
    fn lh_as_array_relabels() {
        let l = random_latin_hypercube(6, 2, 3).unwrap();
        let oa = OrthogonalArray::from_latin_hypercube(&l).unwrap();
        let out = oa_based_lh(&oa, 9).unwrap();
        assert_eq!(out, l);
    }

    #[test]
    fn random_hypercubes_lack_projection_property() {
        let holds = (0..100)
            .filter(|&seed| {
                let l = random_latin_hypercube(9, 4, seed).unwrap();
                verify_projection_property(&l, 3, 2).unwrap().holds
            })
            .count();
        assert!(holds <= 2, "{holds}");
        let l = random_latin_hypercube(9, 4, 0).unwrap();
        assert!(verify_projection_property(&l, 9, 1).unwrap().holds);
        assert!(verify_projection_property(&l, 2, 2).is_err());
    }

    #[test]
    fn asymmetric_array() {
        // OA(8, 2^2 4^1, 2)
        let rows = [
            [1, 1, 1],
            [1, 2, 2],
            [2, 1, 3],
            [2, 2, 4],
            [1, 1, 4],
            [1, 2, 3],
            [2, 1, 2],
            [2, 2, 1],
        ];
        let rows: Vec<Vec<usize>> = rows.iter().map(|r| r.to_vec()).collect();
        let oa = OrthogonalArray::new(Matrix::from_rows(&rows).unwrap(), vec![2, 2, 4], 2).unwrap();
        assert!(verify_strength(&oa, 2).holds);
        assert!(oa_based_lh(&oa, 1).is_err());
        let l = oa_based_lh_asym(&oa, 1).unwrap();
        assert!(validate_latin_hypercube(&l).passed);
        for i in 0..8 {
            assert_eq!(l.rank_at(i, 2).unwrap() / 2 + 1, oa.symbol(i, 2));
        }
    }
}
