//! Mean estimation over designs and replicated variance experiments
//! comparing simple random, Latin hypercube and OA-based sampling.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::design::{random_latin_hypercube, to_unit_cube, DesignMatrix, JitterMode};
use crate::error::{Error, Result};
use crate::matrix::RealMatrix;
use crate::oa::{oa_based_lh, OrthogonalArray};
use crate::rng;

pub const MIN_REPLICATIONS: usize = 100;
pub const MIN_QUADRATURE_POINTS: usize = 64;

/// Largest tensor quadrature grid, in function evaluations.
const MAX_GRID: u128 = 1 << 28;

/// Integrands with known ANOVA structure on `[0, 1)^k`.
#[derive(Debug, Clone, Copy, Serialize)]
pub enum TestFunction {
    Constant {
        value: f64,
        arity: usize,
    },
    /// `Σ x_j`.
    AdditiveLinear {
        arity: usize,
    },
    /// `Σ exp(x_j)`.
    AdditiveExp {
        arity: usize,
    },
    /// `(x_1 - 1/2)(x_2 - 1/2)`, no main effects.
    Interaction,
    /// `x_1 x_2`.
    Product,
    /// `Σ (x_j - 1/2)^2`, additive but not monotone.
    Quadratic {
        arity: usize,
    },
    #[serde(skip)]
    Custom {
        name: &'static str,
        arity: usize,
        f: fn(&[f64]) -> f64,
    },
}

impl TestFunction {
    /// Looks up a built-in function by its CLI name.
    pub fn by_name(name: &str, arity: usize) -> Result<Self> {
        Ok(match name {
            "constant" => Self::Constant { value: 1.0, arity },
            "linear" => Self::AdditiveLinear { arity },
            "exp" => Self::AdditiveExp { arity },
            "interaction" => Self::Interaction,
            "product" => Self::Product,
            "quadratic" => Self::Quadratic { arity },
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "unknown function '{name}'"
                )))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Constant { .. } => "constant",
            Self::AdditiveLinear { .. } => "linear",
            Self::AdditiveExp { .. } => "exp",
            Self::Interaction => "interaction",
            Self::Product => "product",
            Self::Quadratic { .. } => "quadratic",
            Self::Custom { name, .. } => name,
        }
    }

    pub fn arity(&self) -> usize {
        match *self {
            Self::Constant { arity, .. }
            | Self::AdditiveLinear { arity }
            | Self::AdditiveExp { arity }
            | Self::Quadratic { arity }
            | Self::Custom { arity, .. } => arity,
            Self::Interaction | Self::Product => 2,
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match *self {
            Self::Constant { value, .. } => value,
            Self::AdditiveLinear { .. } => x.iter().sum(),
            Self::AdditiveExp { .. } => x.iter().map(|v| v.exp()).sum(),
            Self::Interaction => (x[0] - 0.5) * (x[1] - 0.5),
            Self::Product => x[0] * x[1],
            Self::Quadratic { .. } => x.iter().map(|v| (v - 0.5).powi(2)).sum(),
            Self::Custom { f, .. } => f(x),
        }
    }

    /// Analytic mean under uniform inputs.
    pub fn mean(&self) -> Option<f64> {
        let k = self.arity() as f64;
        match *self {
            Self::Constant { value, .. } => Some(value),
            Self::AdditiveLinear { .. } => Some(k / 2.0),
            Self::AdditiveExp { .. } => Some(k * (std::f64::consts::E - 1.0)),
            Self::Interaction => Some(0.0),
            Self::Product => Some(0.25),
            Self::Quadratic { .. } => Some(k / 12.0),
            Self::Custom { .. } => None,
        }
    }

    /// Analytic variance of `f(x)` under uniform inputs.
    pub fn variance(&self) -> Option<f64> {
        let k = self.arity() as f64;
        let e = std::f64::consts::E;
        match *self {
            Self::Constant { .. } => Some(0.0),
            Self::AdditiveLinear { .. } => Some(k / 12.0),
            Self::AdditiveExp { .. } => Some(k * ((e * e - 1.0) / 2.0 - (e - 1.0).powi(2))),
            Self::Interaction => Some(1.0 / 144.0),
            Self::Product => Some(7.0 / 144.0),
            Self::Quadratic { .. } => Some(k / 180.0),
            Self::Custom { .. } => None,
        }
    }
}

/// How a design is drawn for one replication.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum SamplingScheme {
    SimpleRandom,
    /// Random Latin hypercube; midpoint placement when `midpoint` is set.
    LatinHypercube {
        midpoint: bool,
    },
    /// OA-based Latin hypercube from the first `k` columns of the array.
    OaLatinHypercube(#[serde(skip)] OrthogonalArray),
}

impl SamplingScheme {
    pub fn name(&self) -> &'static str {
        match self {
            Self::SimpleRandom => "srs",
            Self::LatinHypercube { .. } => "lhs",
            Self::OaLatinHypercube(_) => "oa-lhs",
        }
    }

    fn check(&self, n: usize, k: usize) -> Result<()> {
        if let Self::OaLatinHypercube(oa) = self {
            if oa.rows() != n || oa.cols() < k {
                return Err(Error::IncompatibleArray(format!(
                    "array has {} runs and {} columns; need {n} runs and {k} columns",
                    oa.rows(),
                    oa.cols()
                )));
            }
        }
        Ok(())
    }

    /// One realization of `n` points in `[0, 1)^k`.
    pub fn draw(&self, n: usize, k: usize, seed: u64) -> Result<DesignMatrix> {
        self.check(n, k)?;
        match self {
            Self::SimpleRandom => {
                let mut rng = rng::from_seed(seed);
                let data = (0..n * k).map(|_| rng.gen::<f64>()).collect();
                DesignMatrix::new(RealMatrix::new(n, k, data)?)
            }
            Self::LatinHypercube { midpoint } => {
                let lh = random_latin_hypercube(n, k, seed)?;
                let jitter = if *midpoint {
                    JitterMode::Midpoint
                } else {
                    JitterMode::Random(rng::child_seed(seed, 1))
                };
                to_unit_cube(&lh, jitter)
            }
            Self::OaLatinHypercube(oa) => {
                let cols: Vec<usize> = (0..k).collect();
                let lh = oa_based_lh(&oa.select_columns(&cols)?, seed)?;
                to_unit_cube(&lh, JitterMode::Random(rng::child_seed(seed, 1)))
            }
        }
    }
}

/// `(1/n) Σ f(x_i)`.
pub fn estimate_mean(f: &TestFunction, design: &DesignMatrix) -> Result<f64> {
    let points = design.points();
    if points.cols() != f.arity() {
        return Err(Error::ShapeMismatch(format!(
            "design has {} columns, {} takes {}",
            points.cols(),
            f.name(),
            f.arity()
        )));
    }
    let n = points.rows();
    Ok((0..n).map(|i| f.eval(points.row(i))).sum::<f64>() / n as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarianceReport {
    pub function: String,
    pub scheme: String,
    pub n: usize,
    pub replications: usize,
    pub seed: u64,
    /// Average of the replicated estimates.
    pub mean: f64,
    pub empirical_variance: f64,
    /// Jackknife standard error of `empirical_variance`.
    pub stderr: f64,
}

/// Replicates `μ̂` under `scheme` and reports its variance with a jackknife
/// standard error. Replication `r` uses seed `child_seed(seed, r)`.
pub fn variance_experiment(
    f: &TestFunction,
    n: usize,
    scheme: &SamplingScheme,
    replications: usize,
    seed: u64,
) -> Result<VarianceReport> {
    if replications < MIN_REPLICATIONS {
        return Err(Error::InvalidParameter(format!(
            "{replications} replications; need at least {MIN_REPLICATIONS}"
        )));
    }
    scheme.check(n, f.arity())?;
    let estimates: Vec<f64> = (0..replications)
        .into_par_iter()
        .map(|r| {
            estimate_mean(
                f,
                &scheme.draw(n, f.arity(), rng::child_seed(seed, r as u64))?,
            )
        })
        .collect::<Result<_>>()?;
    let (variance, stderr) = jackknife_variance(&estimates);
    Ok(VarianceReport {
        function: f.name().into(),
        scheme: scheme.name().into(),
        n,
        replications,
        seed,
        mean: estimates.iter().sum::<f64>() / replications as f64,
        empirical_variance: variance,
        stderr,
    })
}

/// Unbiased sample variance and its jackknife standard error.
pub fn jackknife_variance(values: &[f64]) -> (f64, f64) {
    let r = values.len();
    if r < 3 {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / r as f64;
    let centered: Vec<f64> = values.iter().map(|v| v - mean).collect();
    let s1: f64 = centered.iter().sum();
    let s2: f64 = centered.iter().map(|c| c * c).sum();
    let rf = r as f64;
    let variance = (s2 - s1 * s1 / rf) / (rf - 1.0);
    let leave_out: Vec<f64> = centered
        .iter()
        .map(|c| {
            let (a, b) = (s1 - c, s2 - c * c);
            (b - a * a / (rf - 1.0)) / (rf - 2.0)
        })
        .collect();
    let avg = leave_out.iter().sum::<f64>() / rf;
    let spread: f64 = leave_out.iter().map(|v| (v - avg).powi(2)).sum();
    (variance, ((rf - 1.0) / rf * spread).sqrt())
}

/// Gauss–Legendre nodes and weights on `[0, 1]`.
fn unit_rule(points: usize) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(NonZeroUsize::new(points).expect("positive"));
    rule.as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| ((x + 1.0) / 2.0, w / 2.0))
        .collect()
}

/// `∫ g` over `[0,1]^dims` on the tensor grid of `rule`.
fn tensor_integral(rule: &[(f64, f64)], dims: usize, mut g: impl FnMut(&[f64]) -> f64) -> f64 {
    let m = rule.len();
    let mut index = vec![0usize; dims];
    let mut x: Vec<f64> = vec![rule[0].0; dims];
    let mut total = 0.0;
    loop {
        let w: f64 = index.iter().map(|&i| rule[i].1).product();
        total += w * g(&x);
        let mut pos = 0;
        loop {
            if pos == dims {
                return total;
            }
            index[pos] += 1;
            if index[pos] < m {
                x[pos] = rule[index[pos]].0;
                break;
            }
            index[pos] = 0;
            x[pos] = rule[0].0;
            pos += 1;
        }
    }
}

fn check_grid(points: usize, dims: usize) -> Result<()> {
    if points < MIN_QUADRATURE_POINTS {
        return Err(Error::InvalidParameter(format!(
            "{points} quadrature points; need at least {MIN_QUADRATURE_POINTS}"
        )));
    }
    let required = (points as u128)
        .checked_pow(dims as u32)
        .unwrap_or(u128::MAX);
    if required > MAX_GRID {
        return Err(Error::BudgetExceeded {
            required,
            budget: MAX_GRID,
        });
    }
    Ok(())
}

/// `Var[f(x)]` by tensor-grid quadrature.
pub fn function_variance(f: &TestFunction, quadrature_points: usize) -> Result<f64> {
    let k = f.arity();
    check_grid(quadrature_points, k)?;
    let rule = unit_rule(quadrature_points);
    let mean = tensor_integral(&rule, k, |x| f.eval(x));
    Ok(tensor_integral(&rule, k, |x| (f.eval(x) - mean).powi(2)))
}

/// Variance of the main effect `f_j(x_j) = E[f | x_j] - μ` by tensor-grid
/// quadrature with `quadrature_points` nodes per axis.
pub fn main_effect_variance(f: &TestFunction, j: usize, quadrature_points: usize) -> Result<f64> {
    let k = f.arity();
    if j >= k {
        return Err(Error::InvalidDimension(format!(
            "factor {j} of a {k}-input function"
        )));
    }
    check_grid(quadrature_points, k)?;
    let rule = unit_rule(quadrature_points);
    let mut point = vec![0.0; k];
    let conditional: Vec<f64> = rule
        .iter()
        .map(|&(xj, _)| {
            tensor_integral(&rule, k - 1, |rest| {
                point[..j].copy_from_slice(&rest[..j]);
                point[j] = xj;
                point[j + 1..].copy_from_slice(&rest[j..]);
                f.eval(&point)
            })
        })
        .collect();
    let mu: f64 = rule.iter().zip(&conditional).map(|((_, w), c)| w * c).sum();
    Ok(rule
        .iter()
        .zip(&conditional)
        .map(|((_, w), c)| w * (c - mu).powi(2))
        .sum())
}

/// Applies inverse marginal distribution functions column by column.
pub fn quantile_transform(
    design: &DesignMatrix,
    inverse_cdfs: &[&dyn Fn(f64) -> f64],
) -> Result<RealMatrix> {
    let points = design.points();
    if inverse_cdfs.len() != points.cols() {
        return Err(Error::ShapeMismatch(format!(
            "{} quantile functions for {} columns",
            inverse_cdfs.len(),
            points.cols()
        )));
    }
    Ok(RealMatrix::from_fn(points.rows(), points.cols(), |i, j| {
        inverse_cdfs[j](points.get(i, j))
    }))
}

/// Inverse CDF of the uniform distribution on `[low, high)`.
pub fn uniform_quantile(low: f64, high: f64) -> impl Fn(f64) -> f64 {
    move |u| low + (high - low) * u
}
