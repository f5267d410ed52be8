//! Column correlations, the ρ_M / ρ²_ave summaries and second-order
//! orthogonality.
//!
//! Level designs are handled in integer arithmetic: with doubled levels `x`,
//! the correlation numerator `n Σxy - Σx Σy` and variance `n Σx² - (Σx)²` are
//! exact, and because every balanced column has the same variance the
//! correlations themselves are exact rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::design::{validate_levels, LevelMatrix};
use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, Matrix, RealMatrix};

/// Off-diagonal tolerance for real-valued orthogonality checks.
pub const REAL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationSummary {
    pub r: RealMatrix,
    pub rho_max: f64,
    pub rho_ave_sq: f64,
}

impl CorrelationSummary {
    fn from_matrix(r: RealMatrix) -> Self {
        let k = r.cols();
        let mut rho_max = 0.0_f64;
        let mut sum_sq = 0.0;
        for i in 0..k {
            for j in i + 1..k {
                let v = r.get(i, j);
                rho_max = rho_max.max(v.abs());
                sum_sq += v * v;
            }
        }
        let pairs = (k * (k - 1) / 2) as f64;
        Self {
            r,
            rho_max,
            rho_ave_sq: sum_sq / pairs,
        }
    }

    /// Square root of ρ²_ave, the root-mean-square correlation.
    pub fn rho_rms(&self) -> f64 {
        self.rho_ave_sq.sqrt()
    }
}

/// Exact centered cross-products of an integer matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactCorrelation {
    /// `n Σ x_a x_b - Σ x_a Σ x_b` for every column pair.
    pub numerators: Matrix<i128>,
}

impl ExactCorrelation {
    pub fn new(x: &IntMatrix) -> Self {
        Self {
            numerators: centered_cross(x, x),
        }
    }

    pub fn cols(&self) -> usize {
        self.numerators.cols()
    }

    pub fn variance(&self, col: usize) -> i128 {
        self.numerators.get(col, col)
    }

    fn check_variances(&self) -> Result<()> {
        match (0..self.cols()).find(|&j| self.variance(j) == 0) {
            Some(column) => Err(Error::ZeroVariance { column }),
            None => Ok(()),
        }
    }

    pub fn r_squared(&self, a: usize, b: usize) -> BigRational {
        let num = BigInt::from(self.numerators.get(a, b));
        BigRational::new(
            &num * &num,
            BigInt::from(self.variance(a)) * BigInt::from(self.variance(b)),
        )
    }

    /// Exact correlation, available when both columns share one variance.
    pub fn r(&self, a: usize, b: usize) -> Option<BigRational> {
        (self.variance(a) == self.variance(b)).then(|| {
            BigRational::new(
                BigInt::from(self.numerators.get(a, b)),
                BigInt::from(self.variance(a)),
            )
        })
    }

    /// Exact correlation matrix when all columns share one variance.
    pub fn r_matrix(&self) -> Option<Vec<Vec<BigRational>>> {
        let k = self.cols();
        (0..k)
            .map(|a| (0..k).map(|b| self.r(a, b)).collect::<Option<Vec<_>>>())
            .collect()
    }

    /// ρ_M², exact.
    pub fn rho_max_sq(&self) -> BigRational {
        let k = self.cols();
        let mut best = BigRational::zero();
        for a in 0..k {
            for b in a + 1..k {
                let v = self.r_squared(a, b);
                if v > best {
                    best = v;
                }
            }
        }
        best
    }

    /// ρ_M as an exact rational, when all columns share one variance.
    pub fn rho_max(&self) -> Option<BigRational> {
        let k = self.cols();
        let mut best = BigRational::zero();
        for a in 0..k {
            for b in a + 1..k {
                let v = self.r(a, b)?.abs();
                if v > best {
                    best = v;
                }
            }
        }
        Some(best)
    }

    /// ρ²_ave, exact.
    pub fn rho_ave_sq(&self) -> BigRational {
        let k = self.cols();
        let mut sum = BigRational::zero();
        for a in 0..k {
            for b in a + 1..k {
                sum += self.r_squared(a, b);
            }
        }
        sum / BigRational::from_integer(BigInt::from(k * (k - 1) / 2))
    }

    pub fn is_identity(&self) -> bool {
        let k = self.cols();
        (0..k).all(|a| (a + 1..k).all(|b| self.numerators.get(a, b) == 0))
    }

    fn to_real(&self) -> RealMatrix {
        let k = self.cols();
        RealMatrix::from_fn(k, k, |a, b| {
            if a == b {
                1.0
            } else {
                self.numerators.get(a, b) as f64
                    / ((self.variance(a) as f64) * (self.variance(b) as f64)).sqrt()
            }
        })
    }
}

/// `n Σ x_a y_b - Σ x_a Σ y_b` for all columns `a` of `x` and `b` of `y`.
fn centered_cross(x: &IntMatrix, y: &IntMatrix) -> Matrix<i128> {
    let n = x.rows() as i128;
    let sums = |m: &IntMatrix| -> Vec<i128> {
        (0..m.cols())
            .map(|j| (0..m.rows()).map(|i| m.get(i, j) as i128).sum())
            .collect()
    };
    let (sx, sy) = (sums(x), sums(y));
    let raw = x.cross_product(y).expect("equal row counts");
    Matrix::from_fn(x.cols(), y.cols(), |a, b| n * raw.get(a, b) - sx[a] * sy[b])
}

fn require_two_columns(k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidDimension(format!(
            "correlation needs at least 2 columns, got {k}"
        )));
    }
    Ok(())
}

/// Exact integer correlations of a level design.
pub fn exact_correlation(design: &LevelMatrix) -> Result<ExactCorrelation> {
    require_two_columns(design.cols())?;
    let exact = ExactCorrelation::new(design.doubled());
    exact.check_variances()?;
    Ok(exact)
}

pub fn correlation_matrix(design: &LevelMatrix) -> Result<CorrelationSummary> {
    let exact = exact_correlation(design)?;
    Ok(CorrelationSummary::from_matrix(exact.to_real()))
}

/// Pearson correlations of an arbitrary real matrix.
pub fn correlation_matrix_real(m: &RealMatrix) -> Result<CorrelationSummary> {
    require_two_columns(m.cols())?;
    let (n, k) = (m.rows(), m.cols());
    let centered: Vec<Vec<f64>> = (0..k)
        .map(|j| {
            let col = m.column(j);
            let mean = col.iter().sum::<f64>() / n as f64;
            col.into_iter().map(|v| v - mean).collect()
        })
        .collect();
    let norms: Vec<f64> = centered
        .iter()
        .map(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt())
        .collect();
    if let Some(column) = norms.iter().position(|&v| v == 0.0) {
        return Err(Error::ZeroVariance { column });
    }
    let r = RealMatrix::from_fn(k, k, |a, b| {
        if a == b {
            1.0
        } else {
            let dot: f64 = centered[a]
                .iter()
                .zip(&centered[b])
                .map(|(x, y)| x * y)
                .sum();
            (dot / (norms[a] * norms[b])).clamp(-1.0, 1.0)
        }
    });
    Ok(CorrelationSummary::from_matrix(r))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrthogonalityReport {
    pub orthogonal: bool,
    pub balanced: bool,
    /// Largest absolute off-diagonal correlation.
    pub max_deviation: f64,
}

/// Balanced and exactly column-orthogonal.
pub fn is_orthogonal(design: &LevelMatrix) -> OrthogonalityReport {
    let balanced = validate_levels(design).passed;
    if design.cols() < 2 {
        return OrthogonalityReport {
            orthogonal: balanced,
            balanced,
            max_deviation: 0.0,
        };
    }
    let exact = ExactCorrelation::new(design.doubled());
    if exact.check_variances().is_err() {
        return OrthogonalityReport {
            orthogonal: false,
            balanced,
            max_deviation: f64::NAN,
        };
    }
    let summary = CorrelationSummary::from_matrix(exact.to_real());
    OrthogonalityReport {
        orthogonal: balanced && exact.is_identity(),
        balanced,
        max_deviation: summary.rho_max,
    }
}

/// Orthogonality of a real matrix within [`REAL_TOLERANCE`].
pub fn is_orthogonal_real(m: &RealMatrix) -> OrthogonalityReport {
    match correlation_matrix_real(m) {
        Ok(s) => OrthogonalityReport {
            orthogonal: s.rho_max <= REAL_TOLERANCE,
            balanced: true,
            max_deviation: s.rho_max,
        },
        Err(_) => OrthogonalityReport {
            orthogonal: m.cols() < 2,
            balanced: true,
            max_deviation: if m.cols() < 2 { 0.0 } else { f64::NAN },
        },
    }
}

/// Element-wise products `x_i ⊙ x_j` for `i ≤ j` in lexicographic order.
pub fn interaction_columns(x: &IntMatrix) -> IntMatrix {
    let k = x.cols();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i..k).map(move |j| (i, j))).collect();
    IntMatrix::from_fn(x.rows(), pairs.len(), |r, c| {
        let (i, j) = pairs[c];
        x.get(r, i) * x.get(r, j)
    })
}

pub fn interaction_columns_real(x: &RealMatrix) -> RealMatrix {
    let k = x.cols();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i..k).map(move |j| (i, j))).collect();
    RealMatrix::from_fn(x.rows(), pairs.len(), |r, c| {
        let (i, j) = pairs[c];
        x.get(r, i) * x.get(r, j)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SecondOrderReport {
    pub first_order: bool,
    pub second_order: bool,
    /// Largest absolute correlation among column pairs and column/interaction pairs.
    pub max_abs_corr: f64,
}

/// First- and second-order orthogonality of a level design, exactly.
/// Interaction columns with zero variance count as uncorrelated.
pub fn second_order_check(design: &LevelMatrix) -> Result<SecondOrderReport> {
    let exact = exact_correlation(design)?;
    let x = design.doubled();
    let inter = interaction_columns(x);
    let cross = centered_cross(x, &inter);
    let inter_var = centered_cross(&inter, &inter);

    let mut max_abs = CorrelationSummary::from_matrix(exact.to_real()).rho_max;
    let mut second = true;
    for a in 0..x.cols() {
        for c in 0..inter.cols() {
            let v = inter_var.get(c, c);
            if v == 0 {
                continue;
            }
            let num = cross.get(a, c);
            if num != 0 {
                second = false;
                let r = num as f64 / ((exact.variance(a) as f64) * (v as f64)).sqrt();
                max_abs = max_abs.max(r.abs());
            }
        }
    }
    let first = exact.is_identity();
    Ok(SecondOrderReport {
        first_order: first,
        second_order: first && second,
        max_abs_corr: max_abs,
    })
}

/// Second-order check for real matrices within [`REAL_TOLERANCE`].
pub fn second_order_check_real(m: &RealMatrix) -> Result<SecondOrderReport> {
    let first = correlation_matrix_real(m)?;
    let inter = interaction_columns_real(m);
    let joined = RealMatrix::hstack(&[m, &inter])?;
    let k = m.cols();
    let n = m.rows() as f64;
    let centered: Vec<Vec<f64>> = (0..joined.cols())
        .map(|j| {
            let col = joined.column(j);
            let mean = col.iter().sum::<f64>() / n;
            col.into_iter().map(|v| v - mean).collect()
        })
        .collect();
    let norm = |c: &[f64]| c.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut max_abs = first.rho_max;
    for a in 0..k {
        for c in k..joined.cols() {
            let nc = norm(&centered[c]);
            let scale = centered[c].iter().map(|v| v.abs()).fold(0.0, f64::max);
            if nc <= REAL_TOLERANCE * scale.max(1.0) {
                continue;
            }
            let dot: f64 = centered[a]
                .iter()
                .zip(&centered[c])
                .map(|(x, y)| x * y)
                .sum();
            max_abs = max_abs.max((dot / (norm(&centered[a]) * nc)).abs());
        }
    }
    let first_order = first.rho_max <= REAL_TOLERANCE;
    Ok(SecondOrderReport {
        first_order,
        second_order: first_order && max_abs <= REAL_TOLERANCE,
        max_abs_corr: max_abs,
    })
}
