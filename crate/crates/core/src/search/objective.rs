//! Objectives and their incremental evaluation under within-column swaps.

use serde::Serialize;

use crate::correlation::correlation_matrix;
use crate::design::{to_unit_cube, JitterMode, LevelMatrix};
use crate::discrepancy::{centered_l2, l2_discrepancy, modified_l2, symmetric_l2};
use crate::distance::{audze_eglais, dmin2, phi_q, DistanceOrder};
use crate::error::Result;
use crate::matrix::{IntMatrix, Matrix};

/// A criterion to minimize. Distance criteria are measured on true levels,
/// discrepancies on the midpoint unit-cube image.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Objective {
    PhiQ { q: u32, order: DistanceOrder },
    RhoAveSq,
    RhoMax,
    AudzeEglais { order: DistanceOrder },
    Dmin2Negated { order: DistanceOrder },
    Cl2,
    Sl2,
    Ml2,
    L2,
}

impl Objective {
    pub fn evaluate(&self, design: &LevelMatrix) -> Result<f64> {
        let levels = || design.true_levels();
        let cube = || to_unit_cube(design, JitterMode::Midpoint);
        Ok(match *self {
            Self::PhiQ { q, order } => phi_q(design, q, order)?,
            Self::RhoAveSq | Self::RhoMax if design.cols() < 2 => 0.0,
            Self::RhoAveSq => correlation_matrix(design)?.rho_ave_sq,
            Self::RhoMax => correlation_matrix(design)?.rho_max,
            Self::AudzeEglais { order } => audze_eglais(&levels(), order).unwrap_or(f64::INFINITY),
            Self::Dmin2Negated { order } => -dmin2(&levels(), order)?,
            Self::Cl2 => centered_l2(&cube()?).value,
            Self::Sl2 => symmetric_l2(&cube()?).value,
            Self::Ml2 => modified_l2(&cube()?).value,
            Self::L2 => l2_discrepancy(&cube()?).value,
        })
    }

    /// A value no design can beat, when one is known.
    pub fn lower_bound(&self) -> Option<f64> {
        match self {
            Self::RhoAveSq | Self::RhoMax => Some(0.0),
            _ => None,
        }
    }
}

enum State {
    /// Pairwise distances with `value = (Σ d^-power)^(1/root)`.
    Distance {
        order: DistanceOrder,
        power: i32,
        root: f64,
        pairs: Vec<f64>,
    },
    /// Cross products of doubled columns and column sums.
    Correlation {
        gram: Matrix<i128>,
        sums: Vec<i128>,
        max: bool,
    },
    Full,
}

/// A design under search together with its objective, updated in place.
pub(crate) struct Evaluator {
    objective: Objective,
    levels: usize,
    design: IntMatrix,
    state: State,
    value: f64,
}

impl Evaluator {
    pub fn new(design: &LevelMatrix, objective: Objective) -> Result<Self> {
        let levels = design.levels();
        let doubled = design.doubled().clone();
        let state = match objective {
            Objective::PhiQ { q, order } => {
                Self::distance_state(&doubled, order, q as i32, q as f64)
            }
            Objective::AudzeEglais { order } => Self::distance_state(&doubled, order, 2, 1.0),
            Objective::RhoAveSq | Objective::RhoMax if doubled.cols() >= 2 => {
                let gram = doubled.cross_product(&doubled)?;
                let sums = (0..doubled.cols())
                    .map(|j| doubled.column(j).iter().map(|&v| v as i128).sum())
                    .collect();
                State::Correlation {
                    gram,
                    sums,
                    max: objective == Objective::RhoMax,
                }
            }
            _ => State::Full,
        };
        let mut e = Self {
            objective,
            levels,
            design: doubled,
            state,
            value: 0.0,
        };
        e.value = e.recompute()?;
        Ok(e)
    }

    fn distance_state(design: &IntMatrix, order: DistanceOrder, power: i32, root: f64) -> State {
        let n = design.rows();
        let mut pairs = vec![0.0; n * n];
        for a in 0..n {
            for b in a + 1..n {
                let d = row_distance(design.row(a), design.row(b), order);
                pairs[a * n + b] = d;
                pairs[b * n + a] = d;
            }
        }
        State::Distance {
            order,
            power,
            root,
            pairs,
        }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn design(&self) -> &IntMatrix {
        &self.design
    }

    pub fn level_matrix(&self) -> LevelMatrix {
        LevelMatrix::from_doubled(self.design.clone(), self.levels)
            .expect("shape preserved by swaps")
    }

    fn recompute(&self) -> Result<f64> {
        match &self.state {
            State::Distance {
                power, root, pairs, ..
            } => {
                let n = self.design.rows();
                let mut sum = 0.0;
                for a in 0..n {
                    for b in a + 1..n {
                        sum += pairs[a * n + b].powi(-power);
                    }
                }
                Ok(sum.powf(1.0 / root))
            }
            State::Correlation { gram, sums, max } => Ok(correlation_value(
                gram,
                sums,
                self.design.rows(),
                *max,
                None,
            )),
            State::Full => self.objective.evaluate(&self.level_matrix()),
        }
    }

    /// Objective value after swapping rows `r1`, `r2` of column `col`.
    pub fn propose(&self, col: usize, r1: usize, r2: usize) -> Result<f64> {
        let (x1, x2) = (self.design.get(r1, col), self.design.get(r2, col));
        if x1 == x2 {
            return Ok(self.value);
        }
        match &self.state {
            State::Distance {
                order,
                power,
                root,
                pairs,
            } => {
                let n = self.design.rows();
                let mut sum = self.value.powf(*root);
                let row1 = swapped_row(&self.design, r1, col, x2);
                let row2 = swapped_row(&self.design, r2, col, x1);
                for other in 0..n {
                    if other == r1 || other == r2 {
                        continue;
                    }
                    let o = self.design.row(other);
                    sum -= pairs[r1 * n + other].powi(-power) + pairs[r2 * n + other].powi(-power);
                    sum += row_distance(&row1, o, *order).powi(-power)
                        + row_distance(&row2, o, *order).powi(-power);
                }
                Ok(sum.max(0.0).powf(1.0 / root))
            }
            State::Correlation { gram, sums, max } => {
                let n = self.design.rows();
                let k = self.design.cols();
                let change: Vec<i128> = (0..k)
                    .map(|b| {
                        if b == col {
                            0
                        } else {
                            let (y1, y2) = (self.design.get(r1, b), self.design.get(r2, b));
                            (x2 - x1) as i128 * (y1 - y2) as i128
                        }
                    })
                    .collect();
                Ok(correlation_value(gram, sums, n, *max, Some((col, &change))))
            }
            State::Full => {
                let mut trial = self.design.clone();
                trial.swap_in_column(col, r1, r2);
                self.objective
                    .evaluate(&LevelMatrix::from_doubled(trial, self.levels)?)
            }
        }
    }

    /// Applies the swap and refreshes the value exactly.
    pub fn apply(&mut self, col: usize, r1: usize, r2: usize) -> Result<()> {
        let (x1, x2) = (self.design.get(r1, col), self.design.get(r2, col));
        if x1 == x2 {
            return Ok(());
        }
        let n = self.design.rows();
        match &mut self.state {
            State::Distance { order, pairs, .. } => {
                self.design.swap_in_column(col, r1, r2);
                for r in [r1, r2] {
                    for other in 0..n {
                        if other != r {
                            let d =
                                row_distance(self.design.row(r), self.design.row(other), *order);
                            pairs[r * n + other] = d;
                            pairs[other * n + r] = d;
                        }
                    }
                }
            }
            State::Correlation { gram, .. } => {
                for b in 0..self.design.cols() {
                    if b != col {
                        let (y1, y2) = (self.design.get(r1, b), self.design.get(r2, b));
                        let delta = (x2 - x1) as i128 * (y1 - y2) as i128;
                        gram.set(col, b, gram.get(col, b) + delta);
                        gram.set(b, col, gram.get(b, col) + delta);
                    }
                }
                self.design.swap_in_column(col, r1, r2);
            }
            State::Full => self.design.swap_in_column(col, r1, r2),
        }
        self.value = self.recompute()?;
        debug_assert!(self.matches_full_evaluation(), "incremental value diverged");
        Ok(())
    }

    fn matches_full_evaluation(&self) -> bool {
        let Ok(full) = self.objective.evaluate(&self.level_matrix()) else {
            return true;
        };
        if full.is_infinite() || self.value.is_infinite() {
            return full.is_infinite() == self.value.is_infinite();
        }
        (full - self.value).abs() <= 1e-9 * full.abs().max(1.0)
    }
}

fn swapped_row(design: &IntMatrix, row: usize, col: usize, value: i64) -> Vec<i64> {
    let mut r = design.row(row).to_vec();
    r[col] = value;
    r
}

fn row_distance(a: &[i64], b: &[i64], order: DistanceOrder) -> f64 {
    order.combine(a.iter().zip(b).map(|(x, y)| (x - y).abs() as f64 / 2.0))
}

/// `ρ_M` or `ρ²_ave` from cross products, optionally with a pending change
/// to row `col` of the Gram matrix.
fn correlation_value(
    gram: &Matrix<i128>,
    sums: &[i128],
    n: usize,
    max: bool,
    change: Option<(usize, &[i128])>,
) -> f64 {
    let k = sums.len();
    let n = n as i128;
    let var: Vec<f64> = (0..k)
        .map(|a| (n * gram.get(a, a) - sums[a] * sums[a]) as f64)
        .collect();
    let mut best = 0.0_f64;
    let mut total = 0.0;
    for a in 0..k {
        for b in a + 1..k {
            let mut g = gram.get(a, b);
            if let Some((col, delta)) = change {
                if a == col {
                    g += delta[b];
                } else if b == col {
                    g += delta[a];
                }
            }
            let denom = (var[a] * var[b]).sqrt();
            let r = if denom > 0.0 {
                (n * g - sums[a] * sums[b]) as f64 / denom
            } else {
                0.0
            };
            best = best.max(r.abs());
            total += r * r;
        }
    }
    if max {
        best
    } else {
        total / (k * (k - 1) / 2) as f64
    }
}
