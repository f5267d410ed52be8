//! Closed-form discrepancies against quadrature of their defining integrals,
//! and the alternative printed forms that the quadrature rejects.

mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sfdesign::design::DesignMatrix;
use sfdesign::discrepancy::{centered_l2, l2_discrepancy, modified_l2, symmetric_l2};

fn random_points(n: usize, seed: u64) -> (DesignMatrix, common::Points) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<[f64; 3]> = (0..n).map(|_| [rng.gen(), rng.gen(), rng.gen()]).collect();
    let d = DesignMatrix::from_rows(&rows).unwrap();
    let p = common::points_of(&d);
    (d, p)
}

fn pair_sum(p: &common::Points, term: impl Fn(f64, f64) -> f64) -> f64 {
    let n = p.len() as f64;
    let mut total = 0.0;
    for a in p {
        for b in p {
            total += a.iter().zip(b).map(|(&x, &y)| term(x, y)).product::<f64>();
        }
    }
    total / (n * n)
}

fn single_sum(p: &common::Points, term: impl Fn(f64) -> f64) -> f64 {
    p.iter()
        .map(|x| x.iter().map(|&v| term(v)).product::<f64>())
        .sum::<f64>()
        / p.len() as f64
}

/// Star L2 with leading term 2^-s.
fn star_leading_half(p: &common::Points) -> f64 {
    let s = p[0].len() as i32;
    2f64.powi(-s) - 2f64.powi(1 - s) * single_sum(p, |x| 1.0 - x * x)
        + pair_sum(p, |x, y| 1.0 - x.max(y))
}

/// Centered L2 with a constant (13/12)^2 leading term.
fn centered_fixed_square(p: &common::Points) -> f64 {
    let h = |x: f64| (x - 0.5).abs();
    (13.0f64 / 12.0).powi(2) - 2.0 * single_sum(p, |x| 1.0 + h(x) / 2.0 - h(x) * h(x) / 2.0)
        + pair_sum(p, |x, y| {
            1.0 + h(x) / 2.0 + h(y) / 2.0 - (x - y).abs() / 2.0
        })
}

/// Modified L2 with the pair term max(x_il, x_il) summed s times per point.
fn modified_self_max(p: &common::Points) -> f64 {
    let s = p[0].len() as i32;
    let n = p.len() as f64;
    let self_term: f64 = p
        .iter()
        .map(|x| x.iter().map(|&v| 2.0 - v).product::<f64>())
        .sum();
    (4.0f64 / 3.0).powi(s) - 2f64.powi(1 - s) * single_sum(p, |x| 3.0 - x * x)
        + f64::from(s) * self_term / (n * n)
}

#[test]
fn closed_forms_match_quadrature() {
    for seed in 0..5 {
        let (d, p) = random_points(7, seed);
        assert!((l2_discrepancy(&d).value - common::warnock_oracle(&p)).abs() < 1e-10);
        assert!((centered_l2(&d).value - common::centered_oracle(&p)).abs() < 1e-10);
        assert!((modified_l2(&d).value - common::modified_oracle(&p)).abs() < 1e-10);
        assert!((symmetric_l2(&d).value - common::symmetric_oracle(&p)).abs() < 1e-10);
    }
}

#[test]
fn alternative_forms_disagree_with_quadrature() {
    for seed in 0..5 {
        let (_, p) = random_points(7, seed);
        assert!((star_leading_half(&p) - common::warnock_oracle(&p)).abs() > 1e-3);
        assert!((centered_fixed_square(&p) - common::centered_oracle(&p)).abs() > 1e-3);
        assert!((modified_self_max(&p) - common::modified_oracle(&p)).abs() > 1e-3);
    }
}

#[test]
fn symmetric_value_is_four_times_the_box_integral() {
    let (d, p) = random_points(6, 11);
    let raw = common::integrate_projections(&p, common::symmetric_local);
    assert!((symmetric_l2(&d).value - 4.0 * raw).abs() < 1e-10);
}
