mod common;

use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use sfdesign::design::{
    random_latin_hypercube, to_unit_cube, validate_latin_hypercube, DesignMatrix, JitterMode,
};
use sfdesign::discrepancy::{centered_l2, l2_discrepancy, symmetric_l2};
use sfdesign::distance::DistanceOrder;
use sfdesign::oa::{galois_oa, oa_based_lh, verify_projection_property};
use sfdesign::olh::oa_coupling_olh;
use sfdesign::search::{anneal_from, Objective, SearchParams};

fn unit_points() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (1usize..4)
        .prop_flat_map(|s| prop::collection::vec(prop::collection::vec(0.0f64..1.0, s), 2..9))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_lh_is_latin(n in 1usize..40, k in 1usize..6, seed in any::<u64>()) {
        let d = random_latin_hypercube(n, k, seed).unwrap();
        prop_assert!(validate_latin_hypercube(&d).passed);
    }

    #[test]
    fn jittered_points_stratify(n in 2usize..30, seed in any::<u64>()) {
        let d = to_unit_cube(&random_latin_hypercube(n, 3, seed).unwrap(), JitterMode::Random(seed)).unwrap();
        for j in 0..3 {
            let mut cells: Vec<usize> = (0..n).map(|i| (d.get(i, j) * n as f64).floor() as usize).collect();
            cells.sort_unstable();
            prop_assert_eq!(cells, (0..n).collect::<Vec<_>>());
        }
    }

    #[test]
    fn annealing_stays_latin_and_repeats(n in 3usize..10, k in 2usize..4, seed in any::<u64>()) {
        let start = random_latin_hypercube(n, k, seed).unwrap();
        let params = SearchParams { seed, max_iterations: 300, restarts: 2, ..SearchParams::default() };
        let objective = Objective::PhiQ { q: 15, order: DistanceOrder::EUCLIDEAN };
        let a = anneal_from(&start, objective, &params).unwrap();
        let b = anneal_from(&start, objective, &params).unwrap();
        prop_assert!(validate_latin_hypercube(&a.design).passed);
        prop_assert_eq!(a.value, objective.evaluate(&a.design).unwrap());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn discrepancies_ignore_row_order(points in unit_points(), rot in 0usize..8) {
        let d = DesignMatrix::from_rows(&points).unwrap();
        let mut shuffled = points.clone();
        let len = shuffled.len();
        shuffled.rotate_left(rot % len);
        let e = DesignMatrix::from_rows(&shuffled).unwrap();
        prop_assert!((l2_discrepancy(&d).value - l2_discrepancy(&e).value).abs() < 1e-12);
        prop_assert!((centered_l2(&d).value - centered_l2(&e).value).abs() < 1e-12);
        prop_assert!((symmetric_l2(&d).value - symmetric_l2(&e).value).abs() < 1e-12);
    }

    #[test]
    fn reflection_invariance(points in unit_points(), col in 0usize..3) {
        let d = DesignMatrix::from_rows(&points).unwrap();
        let c = col % points[0].len();
        let reflected: Vec<Vec<f64>> = points
            .iter()
            .map(|p| p.iter().enumerate().map(|(j, &x)| if j == c { 1.0 - x } else { x }).collect())
            .collect();
        let r = DesignMatrix::from_rows(&reflected).unwrap();
        prop_assert!((centered_l2(&d).value - centered_l2(&r).value).abs() < 1e-12);
        prop_assert!((symmetric_l2(&d).value - symmetric_l2(&r).value).abs() < 1e-12);
    }

    #[test]
    fn coupling_tensors_correlations(q in prop::sample::select(vec![3usize, 4, 5]), k in 2usize..4, seed in any::<u64>()) {
        let b = random_latin_hypercube(q, k.min(q), seed).unwrap();
        let l = oa_coupling_olh(&b, &galois_oa(q, 2).unwrap()).unwrap();
        let rb = common::signed_squared_correlations(&b);
        let rl = common::signed_squared_correlations(&l);
        for c1 in 0..l.cols() {
            for c2 in 0..l.cols() {
                let expected = if c1 % 2 == c2 % 2 { rb[c1 / 2][c2 / 2].clone() } else { BigRational::zero() };
                prop_assert_eq!(&rl[c1][c2], &expected);
            }
        }
    }

    #[test]
    fn oa_lh_projects_to_the_array(s in prop::sample::select(vec![2usize, 3, 4, 5, 7]), seed in any::<u64>()) {
        let oa = galois_oa(s, 3).unwrap();
        let lh = oa_based_lh(&oa, seed).unwrap();
        prop_assert!(validate_latin_hypercube(&lh).passed);
        let report = verify_projection_property(&lh, s, 2).unwrap();
        prop_assert!(report.holds);
        prop_assert_eq!(report.lambda, 1);
    }
}
