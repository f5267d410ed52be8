//! Star discrepancy (exact, small instances) and the L₂ family: anchored
//! (Warnock), symmetric, centered and modified.
//!
//! All L₂-type values are returned squared. The closed forms are
//!
//! ```text
//! L2²  = 3^-s       - 2^(1-s)/n Σ_i Π_l (1 - x²)            + 1/n² Σ_ij Π_l (1 - max(x_il, x_jl))
//! ML2² = (4/3)^s    - 2^(1-s)/n Σ_i Π_l (3 - x²)            + 1/n² Σ_ij Π_l (2 - max(x_il, x_jl))
//! CL2² = (13/12)^s  - 2/n Σ_i Π_l (1 + z/2 - z²/2)          + 1/n² Σ_ij Π_l (1 + z_il/2 + z_jl/2 - |x_il - x_jl|/2)
//! SL2² = (4/3)^s    - 2/n Σ_i Π_l (1 + 2x - 2x²)            + 2^s/n² Σ_ij Π_l (1 - |x_il - x_jl|)
//! ```
//!
//! with `z = |x - 1/2|`. Each agrees with direct integration of the squared
//! local discrepancy over its box family: `L2²` over anchored boxes `[0, x)`,
//! `ML2²` and `CL2²` summed over all coordinate projections with anchored and
//! nearest-vertex boxes respectively, and `SL2²` equal to four times that sum
//! for the union of boxes towards the even-weight vertices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::design::DesignMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiscrepancyMethod {
    StarExact,
    #[serde(rename = "l2-warnock")]
    L2Warnock,
    #[serde(rename = "sl2")]
    Symmetric,
    #[serde(rename = "cl2")]
    Centered,
    #[serde(rename = "ml2")]
    Modified,
    BruteForce,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscrepancyResult {
    pub value: f64,
    pub method: DiscrepancyMethod,
    /// Whether `value` is the squared discrepancy.
    pub squared: bool,
}

impl DiscrepancyResult {
    /// The discrepancy itself, taking the root of squared values.
    pub fn root(&self) -> f64 {
        if self.squared {
            self.value.max(0.0).sqrt()
        } else {
            self.value
        }
    }
}

/// `a/n Σ_i Π_l single(x_il)` and `b/n² Σ_ij Π_l pair(x_il, x_jl)` combined
/// with a leading constant. Rows are reduced in index order.
fn closed_form(
    points: &DesignMatrix,
    constant: f64,
    single_weight: f64,
    single: impl Fn(f64) -> f64 + Sync,
    pair_weight: f64,
    pair: impl Fn(f64, f64) -> f64 + Sync,
) -> f64 {
    let n = points.rows();
    let nf = n as f64;
    let singles: f64 = (0..n)
        .map(|i| points.row(i).iter().map(|&x| single(x)).product::<f64>())
        .sum();
    let row_pairs: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let xi = points.row(i);
            (0..n)
                .map(|j| {
                    xi.iter()
                        .zip(points.row(j))
                        .map(|(&a, &b)| pair(a, b))
                        .product::<f64>()
                })
                .sum()
        })
        .collect();
    let pairs: f64 = row_pairs.iter().sum();
    (constant - single_weight / nf * singles + pair_weight / (nf * nf) * pairs).max(0.0)
}

fn result(value: f64, method: DiscrepancyMethod) -> DiscrepancyResult {
    DiscrepancyResult {
        value,
        method,
        squared: true,
    }
}

/// Squared L₂ star discrepancy over anchored boxes `[0, x)`.
pub fn l2_discrepancy(points: &DesignMatrix) -> DiscrepancyResult {
    let s = points.cols() as i32;
    let v = closed_form(
        points,
        3f64.powi(-s),
        2f64.powi(1 - s),
        |x| 1.0 - x * x,
        1.0,
        |a, b| 1.0 - a.max(b),
    );
    result(v, DiscrepancyMethod::L2Warnock)
}

/// Squared L₂ star discrepancy in exact rational arithmetic. Every finite
/// `f64` is a dyadic rational, so the closed form is evaluated without
/// rounding.
pub fn l2_discrepancy_exact(points: &DesignMatrix) -> BigRational {
    let (n, s) = (points.rows(), points.cols());
    let exact: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            points
                .row(i)
                .iter()
                .map(|&x| BigRational::from_float(x).expect("finite coordinate"))
                .collect()
        })
        .collect();
    let one = BigRational::one();
    let int = |v: usize| BigRational::from_integer(BigInt::from(v));
    let pow2 = |e: i64| {
        if e >= 0 {
            int(1 << e)
        } else {
            one.clone() / int(1 << (-e))
        }
    };
    let mut singles = BigRational::zero();
    for row in &exact {
        singles += row.iter().fold(one.clone(), |acc, x| acc * (&one - x * x));
    }
    let mut pairs = BigRational::zero();
    for a in &exact {
        for b in &exact {
            pairs += a
                .iter()
                .zip(b)
                .fold(one.clone(), |acc, (x, y)| acc * (&one - x.max(y)));
        }
    }
    let three_pow = (0..s).fold(one.clone(), |acc, _| acc * int(3));
    one.clone() / three_pow - pow2(1 - s as i64) * singles / int(n) + pairs / int(n * n)
}

/// Squared modified L₂ discrepancy.
pub fn modified_l2(points: &DesignMatrix) -> DiscrepancyResult {
    let s = points.cols() as i32;
    let v = closed_form(
        points,
        (4.0 / 3.0f64).powi(s),
        2f64.powi(1 - s),
        |x| 3.0 - x * x,
        1.0,
        |a, b| 2.0 - a.max(b),
    );
    result(v, DiscrepancyMethod::Modified)
}

/// Squared centered L₂ discrepancy.
pub fn centered_l2(points: &DesignMatrix) -> DiscrepancyResult {
    let s = points.cols() as i32;
    let v = closed_form(
        points,
        (13.0 / 12.0f64).powi(s),
        2.0,
        |x| {
            let z = (x - 0.5).abs();
            1.0 + z / 2.0 - z * z / 2.0
        },
        1.0,
        |a, b| 1.0 + (a - 0.5).abs() / 2.0 + (b - 0.5).abs() / 2.0 - (a - b).abs() / 2.0,
    );
    result(v, DiscrepancyMethod::Centered)
}

/// Squared symmetric L₂ discrepancy.
pub fn symmetric_l2(points: &DesignMatrix) -> DiscrepancyResult {
    let s = points.cols() as i32;
    let v = closed_form(
        points,
        (4.0 / 3.0f64).powi(s),
        2.0,
        |x| 1.0 + 2.0 * x - 2.0 * x * x,
        2f64.powi(s),
        |a, b| 1.0 - (a - b).abs(),
    );
    result(v, DiscrepancyMethod::Symmetric)
}

/// Exact star discrepancy `sup_x |N([0, x))/n - vol([0, x))|`.
///
/// The supremum is attained, possibly as a limit, at corners whose
/// coordinates are point coordinates or 1. At each corner both the open box
/// (count of points strictly below) and the closed box (count of points at
/// or below) are evaluated. Cost is `n` times the number of corners, which
/// must not exceed `budget`.
pub fn star_discrepancy_exact(points: &DesignMatrix, budget: u128) -> Result<DiscrepancyResult> {
    let (n, s) = (points.rows(), points.cols());
    if n == 0 {
        return Err(Error::InvalidDimension("empty design".into()));
    }
    let grids: Vec<Vec<f64>> = (0..s)
        .map(|j| {
            let mut g = points.column(j);
            g.push(1.0);
            g.sort_by(f64::total_cmp);
            g.dedup();
            g
        })
        .collect();
    let corners = grids
        .iter()
        .try_fold(1_u128, |acc, g| acc.checked_mul(g.len() as u128))
        .unwrap_or(u128::MAX);
    let required = corners.saturating_mul(n as u128);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }

    // Enumerate corners by the first coordinate in parallel, the rest by odometer.
    let nf = n as f64;
    let best = grids[0]
        .par_iter()
        .map(|&x0| {
            let mut index = vec![0_usize; s];
            let mut corner = vec![x0; s];
            let mut local = 0.0_f64;
            loop {
                for j in 1..s {
                    corner[j] = grids[j][index[j]];
                }
                let vol: f64 = corner.iter().product();
                let (mut open, mut closed) = (0_usize, 0_usize);
                for i in 0..n {
                    let row = points.row(i);
                    if row.iter().zip(&corner).all(|(p, c)| p <= c) {
                        closed += 1;
                        if row.iter().zip(&corner).all(|(p, c)| p < c) {
                            open += 1;
                        }
                    }
                }
                local = local
                    .max(vol - open as f64 / nf)
                    .max(closed as f64 / nf - vol);
                let mut j = 1;
                loop {
                    if j >= s {
                        return local;
                    }
                    index[j] += 1;
                    if index[j] < grids[j].len() {
                        break;
                    }
                    index[j] = 0;
                    j += 1;
                }
            }
        })
        .collect::<Vec<f64>>()
        .into_iter()
        .fold(0.0, f64::max);
    Ok(DiscrepancyResult {
        value: best,
        method: DiscrepancyMethod::StarExact,
        squared: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::RealMatrix;

    fn design(rows: &[&[f64]]) -> DesignMatrix {
        DesignMatrix::new(RealMatrix::from_rows(rows).unwrap()).unwrap()
    }

    #[test]
    fn one_dimensional_values() {
        let mid = design(&[&[0.5]]);
        assert!((l2_discrepancy(&mid).value - 1.0 / 12.0).abs() < 1e-16);
        assert_eq!(
            l2_discrepancy_exact(&mid),
            BigRational::new(BigInt::from(1), BigInt::from(12))
        );
        assert!((l2_discrepancy(&design(&[&[0.0]])).value - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(star_discrepancy_exact(&mid, 1000).unwrap().value, 0.5);
        let n = 7;
        let rows: Vec<Vec<f64>> = (1..=n)
            .map(|i| vec![(2 * i - 1) as f64 / (2 * n) as f64])
            .collect();
        let lattice = DesignMatrix::new(RealMatrix::from_rows(&rows).unwrap()).unwrap();
        let d = star_discrepancy_exact(&lattice, 1000).unwrap();
        assert!((d.value - 1.0 / 14.0).abs() < 1e-15);
        assert!(!d.squared);
    }

    #[test]
    fn centered_point_collapses() {
        let p = design(&[&[0.5, 0.5]]);
        // z = 0: (13/12)² - 2 + 1
        let expected = (13.0f64 / 12.0).powi(2) - 1.0;
        assert!((centered_l2(&p).value - expected).abs() < 1e-15);
    }

    #[test]
    fn symmetric_reflection_invariance() {
        let p = design(&[&[0.1, 0.7], &[0.35, 0.2], &[0.9, 0.55]]);
        let r = design(&[&[0.9, 0.3], &[0.65, 0.8], &[0.1, 0.45]]);
        assert!((symmetric_l2(&p).value - symmetric_l2(&r).value).abs() < 1e-12);
        assert!((centered_l2(&p).value - centered_l2(&r).value).abs() < 1e-12);
    }

    #[test]
    fn modified_is_sum_over_projections() {
        let p = design(&[
            &[0.1, 0.7],
            &[0.35, 0.2],
            &[0.9, 0.55],
            &[0.6, 0.05],
            &[0.2, 0.95],
            &[0.75, 0.4],
        ]);
        let proj = |j: usize| DesignMatrix::new(p.select_columns(&[j]).unwrap()).unwrap();
        let sum = l2_discrepancy(&p).value
            + l2_discrepancy(&proj(0)).value
            + l2_discrepancy(&proj(1)).value;
        assert!((modified_l2(&p).value - sum).abs() < 1e-9);
    }

    #[test]
    fn star_budget() {
        let p = design(&[&[0.1, 0.7], &[0.35, 0.2]]);
        assert!(matches!(
            star_discrepancy_exact(&p, 5),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
