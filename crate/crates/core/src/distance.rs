//! Inter-point distance criteria.
//!
//! Level designs are measured on their true levels. Their distance profiles
//! group ties exactly through integer power sums of the doubled levels, so the
//! multiplicities `J_i` entering φ_q are never corrupted by rounding.

use std::cmp::Ordering;

use serde::Serialize;

use crate::design::LevelMatrix;
use crate::error::{Error, Result};
use crate::matrix::RealMatrix;

/// Relative tolerance used to group real-valued distances.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// Default φ_q exponent.
pub const DEFAULT_Q: u32 = 15;

/// Suggested φ_q exponents for small, moderate and large designs.
pub const Q_PRESETS: [(&str, u32); 3] = [("small", 5), ("moderate", 20), ("large", 50)];

/// The exponent `t` of the inter-point distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum DistanceOrder {
    Power(f64),
    Chebyshev,
}

impl DistanceOrder {
    pub const RECTANGULAR: Self = Self::Power(1.0);
    pub const EUCLIDEAN: Self = Self::Power(2.0);

    pub fn new(t: f64) -> Result<Self> {
        if t.is_infinite() && t > 0.0 {
            return Ok(Self::Chebyshev);
        }
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::InvalidParameter(format!("distance exponent {t}")));
        }
        Ok(Self::Power(t))
    }

    /// Combines absolute coordinate differences into a distance.
    pub(crate) fn combine(self, diffs: impl Iterator<Item = f64>) -> f64 {
        match self {
            Self::Chebyshev => diffs.fold(0.0, f64::max),
            Self::Power(t) if t == 1.0 => diffs.sum(),
            Self::Power(t) if t == 2.0 => diffs.map(|d| d * d).sum::<f64>().sqrt(),
            Self::Power(t) => diffs.map(|d| d.powf(t)).sum::<f64>().powf(1.0 / t),
        }
    }

    /// Integer exponent for exact power sums, if `t` is a small positive integer.
    fn integer_exponent(self) -> Option<u32> {
        match self {
            Self::Power(t) if t.fract() == 0.0 && (1.0..=4.0).contains(&t) => Some(t as u32),
            _ => None,
        }
    }
}

impl Default for DistanceOrder {
    fn default() -> Self {
        Self::EUCLIDEAN
    }
}

pub fn interpoint_distance(u: &[f64], v: &[f64], ord: DistanceOrder) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::ShapeMismatch(format!(
            "points of dimension {} and {}",
            u.len(),
            v.len()
        )));
    }
    Ok(ord.combine(u.iter().zip(v).map(|(a, b)| (a - b).abs())))
}

fn require_pairs(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidDimension(format!(
            "{n} points; need at least 2"
        )));
    }
    Ok(())
}

fn pair_distances(points: &RealMatrix, ord: DistanceOrder) -> Vec<(usize, usize, f64)> {
    let n = points.rows();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let d = ord.combine(
                points
                    .row(i)
                    .iter()
                    .zip(points.row(j))
                    .map(|(a, b)| (a - b).abs()),
            );
            out.push((i, j, d));
        }
    }
    out
}

pub fn min_interpoint_distance(points: &RealMatrix, ord: DistanceOrder) -> Result<f64> {
    require_pairs(points.rows())?;
    Ok(pair_distances(points, ord)
        .into_iter()
        .map(|(_, _, d)| d)
        .fold(f64::INFINITY, f64::min))
}

/// Grid-approximate minimax distance: the largest distance from a node of the
/// regular grid `{0, 1/(r-1), ..., 1}^k` to its nearest design point.
pub fn minimax_cover_radius(
    points: &RealMatrix,
    ord: DistanceOrder,
    resolution: usize,
    budget: u128,
) -> Result<f64> {
    if resolution < 2 {
        return Err(Error::InvalidParameter(format!(
            "grid resolution {resolution}"
        )));
    }
    if points.rows() == 0 {
        return Err(Error::InvalidDimension("empty design".into()));
    }
    let k = points.cols();
    let nodes = (resolution as u128)
        .checked_pow(k as u32)
        .unwrap_or(u128::MAX);
    let required = nodes.saturating_mul(points.rows() as u128);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let step = 1.0 / (resolution - 1) as f64;
    let mut index = vec![0_usize; k];
    let mut node = vec![0.0; k];
    let mut worst = 0.0_f64;
    loop {
        for (c, &g) in node.iter_mut().zip(&index) {
            *c = g as f64 * step;
        }
        let nearest = (0..points.rows())
            .map(|i| ord.combine(points.row(i).iter().zip(&node).map(|(a, b)| (a - b).abs())))
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(nearest);
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == k {
                return Ok(worst);
            }
            index[pos] += 1;
            if index[pos] < resolution {
                break;
            }
            index[pos] = 0;
            pos += 1;
        }
    }
}

/// Potential energy `Σ_{i<j} d(x_i, x_j)^-2`.
pub fn audze_eglais(points: &RealMatrix, ord: DistanceOrder) -> Result<f64> {
    require_pairs(points.rows())?;
    let mut total = 0.0;
    for (i, j, d) in pair_distances(points, ord) {
        if d == 0.0 {
            return Err(Error::InfiniteEnergy {
                first: i,
                second: j,
            });
        }
        total += 1.0 / (d * d);
    }
    Ok(total)
}

/// Smallest distance over all point pairs and all two-dimensional projections.
pub fn dmin2(points: &RealMatrix, ord: DistanceOrder) -> Result<f64> {
    let k = points.cols();
    if k < 2 {
        return Err(Error::InvalidDimension(format!(
            "{k} columns; need at least 2"
        )));
    }
    require_pairs(points.rows())?;
    let n = points.rows();
    let mut best = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            let diffs: Vec<f64> = points
                .row(i)
                .iter()
                .zip(points.row(j))
                .map(|(a, b)| (a - b).abs())
                .collect();
            for h in 0..k {
                for l in h + 1..k {
                    best = best.min(ord.combine([diffs[h], diffs[l]].into_iter()));
                }
            }
        }
    }
    Ok(best)
}

/// Sorted distinct distances with their multiplicities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceProfile {
    pub distances: Vec<f64>,
    pub multiplicities: Vec<usize>,
    /// False when ties were grouped with a floating-point tolerance.
    pub exact: bool,
}

impl DistanceProfile {
    pub fn len(&self) -> usize {
        self.distances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.distances.is_empty()
    }

    pub fn pair_count(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    /// φ_q, evaluated as `(1/d_1) (Σ J_i (d_1/d_i)^q)^{1/q}` to avoid overflow.
    /// Coincident points give infinity.
    pub fn phi_q(&self, q: u32) -> f64 {
        let d1 = self.distances[0];
        if d1 == 0.0 {
            return f64::INFINITY;
        }
        let q = f64::from(q);
        let sum: f64 = self
            .distances
            .iter()
            .zip(&self.multiplicities)
            .map(|(d, &j)| j as f64 * (d1 / d).powf(q))
            .sum();
        sum.powf(1.0 / q) / d1
    }
}

/// Profile of a level design on its true levels.
pub fn distance_profile(design: &LevelMatrix, ord: DistanceOrder) -> Result<DistanceProfile> {
    let n = design.rows();
    require_pairs(n)?;
    let x = design.doubled();
    let exact_key: Option<Box<dyn Fn(usize, usize) -> i128>> = match (ord, ord.integer_exponent()) {
        (DistanceOrder::Chebyshev, _) => Some(Box::new(|i, j| {
            x.row(i)
                .iter()
                .zip(x.row(j))
                .map(|(a, b)| (a - b).abs() as i128)
                .max()
                .unwrap_or(0)
        })),
        (_, Some(t)) => Some(Box::new(move |i, j| {
            x.row(i)
                .iter()
                .zip(x.row(j))
                .map(|(a, b)| ((a - b).abs() as i128).pow(t))
                .sum()
        })),
        _ => None,
    };
    let Some(key) = exact_key else {
        return distance_profile_real(&design.true_levels(), ord);
    };
    let mut keys: Vec<i128> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| key(i, j))
        .collect();
    keys.sort_unstable();
    let mut distances = Vec::new();
    let mut multiplicities = Vec::new();
    for group in keys.chunk_by(|a, b| a == b) {
        let raw = group[0] as f64;
        let doubled = match (ord, ord.integer_exponent()) {
            (DistanceOrder::Chebyshev, _) | (_, Some(1)) => raw,
            (_, Some(2)) => raw.sqrt(),
            (_, Some(t)) => raw.powf(1.0 / f64::from(t)),
            _ => unreachable!(),
        };
        distances.push(doubled / 2.0);
        multiplicities.push(group.len());
    }
    Ok(DistanceProfile {
        distances,
        multiplicities,
        exact: true,
    })
}

/// Profile of real points with relative-tolerance tie grouping.
pub fn distance_profile_real(points: &RealMatrix, ord: DistanceOrder) -> Result<DistanceProfile> {
    require_pairs(points.rows())?;
    let mut d: Vec<f64> = pair_distances(points, ord)
        .into_iter()
        .map(|(_, _, d)| d)
        .collect();
    d.sort_by(f64::total_cmp);
    let mut distances: Vec<f64> = Vec::new();
    let mut multiplicities: Vec<usize> = Vec::new();
    let mut anchor = f64::NAN;
    for v in d {
        if !distances.is_empty() && v - anchor <= TIE_TOLERANCE * v {
            *multiplicities.last_mut().unwrap() += 1;
        } else {
            anchor = v;
            distances.push(v);
            multiplicities.push(1);
        }
    }
    Ok(DistanceProfile {
        distances,
        multiplicities,
        exact: false,
    })
}

pub fn phi_q(design: &LevelMatrix, q: u32, ord: DistanceOrder) -> Result<f64> {
    check_q(q)?;
    Ok(distance_profile(design, ord)?.phi_q(q))
}

pub fn phi_q_real(points: &RealMatrix, q: u32, ord: DistanceOrder) -> Result<f64> {
    check_q(q)?;
    Ok(distance_profile_real(points, ord)?.phi_q(q))
}

fn check_q(q: u32) -> Result<()> {
    if q == 0 {
        return Err(Error::InvalidParameter(
            "phi_q exponent must be positive".into(),
        ));
    }
    Ok(())
}

/// Sequential maximin order on `(d_1, J_1, d_2, J_2, ...)`: larger distances
/// and then smaller multiplicities are better. `Greater` means `a` is better.
pub fn morris_mitchell_compare(a: &DistanceProfile, b: &DistanceProfile) -> Ordering {
    for idx in 0..a.len().min(b.len()) {
        match a.distances[idx].total_cmp(&b.distances[idx]) {
            Ordering::Equal => {}
            other => return other,
        }
        match b.multiplicities[idx].cmp(&a.multiplicities[idx]) {
            Ordering::Equal => {}
            other => return other,
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::random_latin_hypercube;

    const E: DistanceOrder = DistanceOrder::EUCLIDEAN;
    const R: DistanceOrder = DistanceOrder::RECTANGULAR;

    fn pts(rows: &[&[f64]]) -> RealMatrix {
        RealMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn pair_distances_by_hand() {
        assert_eq!(
            interpoint_distance(&[0.3, 0.2], &[0.3, 0.2], E).unwrap(),
            0.0
        );
        assert_eq!(
            interpoint_distance(&[0.0, 0.0], &[1.0, 1.0], R).unwrap(),
            2.0
        );
        assert_eq!(
            interpoint_distance(&[0.0, 0.0], &[1.0, 1.0], E).unwrap(),
            2f64.sqrt()
        );
        assert_eq!(
            interpoint_distance(&[0.0, 0.0], &[3.0, 4.0], E).unwrap(),
            5.0
        );
        assert_eq!(
            interpoint_distance(&[0.0, 0.0], &[3.0, 4.0], DistanceOrder::Chebyshev).unwrap(),
            4.0
        );
        assert!(interpoint_distance(&[0.0], &[1.0, 1.0], E).is_err());
        assert!(DistanceOrder::new(0.0).is_err());
        assert_eq!(
            DistanceOrder::new(f64::INFINITY).unwrap(),
            DistanceOrder::Chebyshev
        );
    }

    #[test]
    fn min_distance_examples() {
        assert_eq!(
            min_interpoint_distance(&pts(&[&[0.0], &[1.0]]), R).unwrap(),
            1.0
        );
        let lattice = RealMatrix::from_fn(7, 1, |i, _| i as f64 / 6.0);
        assert!((min_interpoint_distance(&lattice, R).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        let square = pts(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]]);
        assert_eq!(min_interpoint_distance(&square, E).unwrap(), 1.0);
        assert!(min_interpoint_distance(&pts(&[&[0.0]]), E).is_err());
    }

    #[test]
    fn minimax_examples() {
        let budget = 1_000_000;
        assert_eq!(
            minimax_cover_radius(&pts(&[&[0.5]]), R, 11, budget).unwrap(),
            0.5
        );
        assert_eq!(
            minimax_cover_radius(&pts(&[&[0.25], &[0.75]]), R, 101, budget).unwrap(),
            0.25
        );
        let grid = RealMatrix::from_fn(9, 2, |i, j| {
            if j == 0 {
                (i / 3) as f64 / 2.0
            } else {
                (i % 3) as f64 / 2.0
            }
        });
        assert_eq!(minimax_cover_radius(&grid, E, 3, budget).unwrap(), 0.0);
        assert!(matches!(
            minimax_cover_radius(&grid, E, 1000, budget),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn audze_eglais_examples() {
        assert_eq!(audze_eglais(&pts(&[&[0.0], &[1.0]]), E).unwrap(), 1.0);
        assert_eq!(audze_eglais(&pts(&[&[0.0], &[2.0]]), E).unwrap(), 0.25);
        assert_eq!(
            audze_eglais(&pts(&[&[0.0], &[0.5], &[1.0]]), E).unwrap(),
            9.0
        );
        assert_eq!(
            audze_eglais(&pts(&[&[0.3], &[0.3]]), E),
            Err(Error::InfiniteEnergy {
                first: 0,
                second: 1
            })
        );
    }

    #[test]
    fn profile_examples() {
        let two = LevelMatrix::latin_from_doubled(
            crate::matrix::IntMatrix::from_rows(&[[-1, 1], [1, -1]]).unwrap(),
        )
        .unwrap();
        let p = distance_profile(&two, E).unwrap();
        assert_eq!((p.len(), p.multiplicities[0]), (1, 1));

        let tri = pts(&[&[0.0, 0.0], &[1.0, 0.0], &[0.5, 3f64.sqrt() / 2.0]]);
        let p = distance_profile_real(&tri, E).unwrap();
        assert_eq!(p.multiplicities, vec![3]);

        let square = pts(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]]);
        let p = distance_profile_real(&square, E).unwrap();
        assert_eq!(p.multiplicities, vec![4, 2]);
        assert!((p.distances[1] - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn phi_q_examples() {
        let p = distance_profile_real(&pts(&[&[0.0], &[0.4]]), E).unwrap();
        assert!((p.phi_q(7) - 2.5).abs() < 1e-12);
        let square = pts(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]]);
        let direct = (4.0 + 2.0 / 2f64.sqrt().powi(50)).powf(1.0 / 50.0);
        assert!((phi_q_real(&square, 50, E).unwrap() - direct).abs() < 1e-12);
        assert!((direct - 1.0281).abs() < 5e-5);
        let handmade = DistanceProfile {
            distances: vec![1.0, 2.0],
            multiplicities: vec![1, 1],
            exact: true,
        };
        assert_eq!(handmade.phi_q(1), 1.5);
    }

    #[test]
    fn exact_profile_matches_tolerance_profile() {
        for seed in 0..20 {
            let l = random_latin_hypercube(10, 4, seed).unwrap();
            for ord in [R, E, DistanceOrder::Chebyshev] {
                let a = distance_profile(&l, ord).unwrap();
                let b = distance_profile_real(&l.true_levels(), ord).unwrap();
                assert_eq!(a.multiplicities, b.multiplicities);
                assert_eq!(a.pair_count(), 45);
                assert!(a.distances.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn dmin2_examples() {
        let a = pts(&[&[0.0, 0.0, 0.0], &[3.0, 4.0, 0.0]]);
        assert_eq!(dmin2(&a, E).unwrap(), 3.0);
        let b = pts(&[&[0.1, 0.7], &[0.4, 0.2], &[0.9, 0.5]]);
        assert_eq!(
            dmin2(&b, E).unwrap(),
            min_interpoint_distance(&b, E).unwrap()
        );
        assert!(dmin2(&pts(&[&[0.1], &[0.2]]), E).is_err());
    }

    #[test]
    fn comparator_prefers_larger_first_distance() {
        let a = DistanceProfile {
            distances: vec![2.0, 3.0],
            multiplicities: vec![5, 1],
            exact: true,
        };
        let b = DistanceProfile {
            distances: vec![1.0, 3.0],
            multiplicities: vec![1, 5],
            exact: true,
        };
        let c = DistanceProfile {
            distances: vec![2.0, 3.0],
            multiplicities: vec![4, 2],
            exact: true,
        };
        assert_eq!(morris_mitchell_compare(&a, &b), Ordering::Greater);
        assert_eq!(morris_mitchell_compare(&a, &c), Ordering::Less);
        assert_eq!(morris_mitchell_compare(&a, &a), Ordering::Equal);
    }
}
