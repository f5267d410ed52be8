//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's metric code; values are computed from definitions.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sfdesign::design::{DesignMatrix, LevelMatrix};

pub type Points = Vec<Vec<f64>>;

pub fn points_of(d: &DesignMatrix) -> Points {
    (0..d.rows()).map(|i| d.row(i).to_vec()).collect()
}

/// Three-node Gauss-Legendre rule on [-1, 1]; exact for quintics.
fn gl3() -> [(f64, f64); 3] {
    let r = (3.0f64 / 5.0).sqrt();
    [(-r, 5.0 / 9.0), (0.0, 8.0 / 9.0), (r, 5.0 / 9.0)]
}

/// Tensor Gauss-Legendre integral over [0,1]^s, three nodes per segment
/// between consecutive `breaks` in each coordinate. Exact for integrands
/// that are polynomials of degree at most five on every cell.
pub fn piecewise_integral(breaks: &[Vec<f64>], f: impl Fn(&[f64]) -> f64) -> f64 {
    let rule = gl3();
    let axes: Vec<Vec<(f64, f64)>> = breaks
        .iter()
        .map(|b| {
            let mut nodes = Vec::new();
            for w in b.windows(2) {
                let (lo, hi) = (w[0], w[1]);
                if hi <= lo {
                    continue;
                }
                for &(t, wt) in &rule {
                    nodes.push(((hi - lo) / 2.0 * t + (hi + lo) / 2.0, (hi - lo) / 2.0 * wt));
                }
            }
            nodes
        })
        .collect();
    let s = axes.len();
    let mut index = vec![0usize; s];
    let mut total = 0.0;
    let mut x = vec![0.0; s];
    loop {
        let mut w = 1.0;
        for d in 0..s {
            x[d] = axes[d][index[d]].0;
            w *= axes[d][index[d]].1;
        }
        total += w * f(&x);
        let mut d = 0;
        loop {
            if d == s {
                return total;
            }
            index[d] += 1;
            if index[d] < axes[d].len() {
                break;
            }
            index[d] = 0;
            d += 1;
        }
    }
}

fn breaks_for(points: &Points) -> Vec<Vec<f64>> {
    let s = points[0].len();
    (0..s)
        .map(|j| {
            let mut b: Vec<f64> = points.iter().map(|p| p[j]).collect();
            b.extend([0.0, 0.5, 1.0]);
            b.sort_by(|a, c| a.partial_cmp(c).unwrap());
            b.dedup();
            b
        })
        .collect()
}

/// Local discrepancy of anchored boxes `[0, x)`.
pub fn star_local(points: &Points, x: &[f64]) -> f64 {
    let n = points.len() as f64;
    let inside = points
        .iter()
        .filter(|p| p.iter().zip(x).all(|(a, b)| a < b))
        .count() as f64;
    inside / n - x.iter().product::<f64>()
}

/// Local discrepancy of the box between `x` and its nearest cube vertex.
pub fn centered_local(points: &Points, x: &[f64]) -> f64 {
    let n = points.len() as f64;
    let bounds: Vec<(f64, f64)> = x
        .iter()
        .map(|&v| {
            let a = if v >= 0.5 { 1.0 } else { 0.0 };
            (v.min(a), v.max(a))
        })
        .collect();
    let inside = points
        .iter()
        .filter(|p| p.iter().zip(&bounds).all(|(v, (lo, hi))| lo <= v && v < hi))
        .count() as f64;
    inside / n - bounds.iter().map(|(lo, hi)| hi - lo).product::<f64>()
}

/// Local discrepancy of the union of boxes spanned by `x` and the cube
/// vertices with an even number of unit coordinates.
pub fn symmetric_local(points: &Points, x: &[f64]) -> f64 {
    let n = points.len() as f64;
    let inside = points
        .iter()
        .filter(|p| p.iter().zip(x).filter(|(v, c)| v >= c).count() % 2 == 0)
        .count() as f64;
    let signed: f64 = x.iter().map(|v| 2.0 * v - 1.0).product();
    inside / n - (1.0 + signed) / 2.0
}

pub type Local = fn(&Points, &[f64]) -> f64;

fn project(points: &Points, u: &[usize]) -> Points {
    points
        .iter()
        .map(|p| u.iter().map(|&j| p[j]).collect())
        .collect()
}

fn subsets(s: usize) -> Vec<Vec<usize>> {
    (1..1usize << s)
        .map(|mask| (0..s).filter(|j| mask >> j & 1 == 1).collect())
        .collect()
}

/// `∫ local²` over the full cube.
pub fn integrate_full(points: &Points, local: Local) -> f64 {
    piecewise_integral(&breaks_for(points), |x| local(points, x).powi(2))
}

/// `Σ_{u ≠ ∅} ∫ local_u²` over all coordinate projections.
pub fn integrate_projections(points: &Points, local: Local) -> f64 {
    subsets(points[0].len())
        .iter()
        .map(|u| integrate_full(&project(points, u), local))
        .sum()
}

pub fn warnock_oracle(points: &Points) -> f64 {
    integrate_full(points, star_local)
}

pub fn modified_oracle(points: &Points) -> f64 {
    integrate_projections(points, star_local)
}

pub fn centered_oracle(points: &Points) -> f64 {
    integrate_projections(points, centered_local)
}

/// The symmetric discrepancy's closed form is four times the projection sum
/// over its box family.
pub const SYMMETRIC_SCALE: f64 = 4.0;

pub fn symmetric_oracle(points: &Points) -> f64 {
    SYMMETRIC_SCALE * integrate_projections(points, symmetric_local)
}

/// Monte Carlo estimate of `∫ local²` with its standard error.
pub fn monte_carlo_full(points: &Points, local: Local, samples: usize, seed: u64) -> (f64, f64) {
    let s = points[0].len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = vec![0.0; s];
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..samples {
        for v in x.iter_mut() {
            *v = rng.gen::<f64>();
        }
        let y = local(points, &x).powi(2);
        sum += y;
        sum_sq += y * y;
    }
    let m = samples as f64;
    let mean = sum / m;
    let var = (sum_sq / m - mean * mean).max(0.0);
    (mean, (var / m).sqrt())
}

/// Monte Carlo estimate over all projections, errors combined in quadrature.
pub fn monte_carlo_projections(
    points: &Points,
    local: Local,
    samples: usize,
    seed: u64,
) -> (f64, f64) {
    let mut mean = 0.0;
    let mut var = 0.0;
    for (i, u) in subsets(points[0].len()).iter().enumerate() {
        let (m, se) = monte_carlo_full(&project(points, u), local, samples, seed + i as u64);
        mean += m;
        var += se * se;
    }
    (mean, var.sqrt())
}

/// Largest local discrepancy over grid corners `i/res`, with both open and
/// closed box counts.
pub fn grid_star_sup(points: &Points, res: usize) -> f64 {
    assert_eq!(points[0].len(), 2, "grid oracle is two-dimensional");
    let n = points.len() as f64;
    let mut best = 0.0f64;
    for a in 0..=res {
        let x = a as f64 / res as f64;
        for b in 0..=res {
            let y = b as f64 / res as f64;
            let (mut open, mut closed) = (0usize, 0usize);
            for p in points {
                if p[0] < x && p[1] < y {
                    open += 1;
                }
                if p[0] <= x && p[1] <= y {
                    closed += 1;
                }
            }
            let vol = x * y;
            best = best
                .max((open as f64 / n - vol).abs())
                .max((closed as f64 / n - vol).abs());
        }
    }
    best
}

/// Exact Pearson correlation matrix from true levels, as rationals.
/// `r_ab = S_ab / sqrt(S_aa S_bb)` is returned squared with its sign.
pub fn signed_squared_correlations(design: &LevelMatrix) -> Vec<Vec<BigRational>> {
    let (n, k) = (design.rows(), design.cols());
    let col = |j: usize| -> Vec<BigInt> {
        (0..n)
            .map(|i| BigInt::from(design.doubled_at(i, j)))
            .collect()
    };
    let cols: Vec<Vec<BigInt>> = (0..k).map(col).collect();
    let centered: Vec<Vec<BigInt>> = cols
        .iter()
        .map(|c| {
            let sum: BigInt = c.iter().sum();
            c.iter().map(|v| v * BigInt::from(n) - &sum).collect()
        })
        .collect();
    let dot = |a: &[BigInt], b: &[BigInt]| -> BigInt { a.iter().zip(b).map(|(x, y)| x * y).sum() };
    let mut out = vec![vec![BigRational::zero(); k]; k];
    for a in 0..k {
        for b in 0..k {
            let s = dot(&centered[a], &centered[b]);
            let denom = dot(&centered[a], &centered[a]) * dot(&centered[b], &centered[b]);
            let sq = BigRational::new(&s * &s, denom);
            out[a][b] = if s.is_negative() { -sq } else { sq };
        }
    }
    out
}
