//! `s`-level Kronecker designs `A ⊗ D₀` and the block form `(a_{pi} D_i)`.

use crate::design::LevelMatrix;
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

use super::{CorrelationScalars, SignMatrix};

/// `D = A ⊗ D₀`.
pub fn bingham_kronecker(a: &SignMatrix, d0: &LevelMatrix) -> Result<LevelMatrix> {
    LevelMatrix::from_doubled(a.matrix().kron(d0.doubled()), d0.levels())
}

/// The `n₁n₂ × k₁k₂` block matrix whose `(p, i)` block is `a_{pi} D_i`.
pub fn bingham_general(a: &SignMatrix, blocks: &[LevelMatrix]) -> Result<LevelMatrix> {
    if blocks.len() != a.cols() {
        return Err(Error::ShapeMismatch(format!(
            "A has {} columns but {} blocks were given",
            a.cols(),
            blocks.len()
        )));
    }
    let first = &blocks[0];
    let (n2, k2, s) = (first.rows(), first.cols(), first.levels());
    if let Some(bad) = blocks
        .iter()
        .find(|d| (d.rows(), d.cols(), d.levels()) != (n2, k2, s))
    {
        return Err(Error::ShapeMismatch(format!(
            "blocks must share shape {n2}x{k2} on {s} levels, found {}x{} on {}",
            bad.rows(),
            bad.cols(),
            bad.levels()
        )));
    }
    let doubled = IntMatrix::from_fn(a.rows() * n2, a.cols() * k2, |r, c| {
        let (p, i) = (r / n2, c / k2);
        a.matrix().get(p, i) * blocks[i].doubled_at(r % n2, c % k2)
    });
    LevelMatrix::from_doubled(doubled, s)
}

/// `ρ_M(D) = max_i ρ_M(D_i)` and
/// `ρ²_ave(D) = (k₂-1)/(k₁k₂-1) · Σ_i ρ²_ave(D_i) / k₁`, for column-orthogonal `A`.
pub fn bingham_prediction(blocks: &[CorrelationScalars], k2: usize) -> CorrelationScalars {
    let k1 = blocks.len();
    if k1 == 0 {
        return CorrelationScalars::default();
    }
    let w = (k2 as f64 - 1.0) / ((k1 * k2) as f64 - 1.0);
    CorrelationScalars {
        rho_max: blocks.iter().map(|b| b.rho_max).fold(0.0, f64::max),
        rho_ave_sq: w * blocks.iter().map(|b| b.rho_ave_sq).sum::<f64>() / k1 as f64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlation::{correlation_matrix, is_orthogonal};
    use crate::design::{random_latin_hypercube, validate_levels};
    use crate::olh::{hadamard, tables};

    #[test]
    fn hadamard_times_sixteen_by_twelve() {
        for m in [2, 4, 8] {
            let d = bingham_kronecker(&hadamard(m).unwrap(), &tables::olh_16x12()).unwrap();
            assert_eq!((d.rows(), d.cols()), (16 * m, 12 * m));
            assert!(validate_levels(&d).passed);
            assert!(is_orthogonal(&d).orthogonal);
        }
    }

    #[test]
    fn block_form_is_orthogonal_iff_blocks_are() {
        let a = hadamard(4).unwrap().select_columns(&[0, 1, 2]).unwrap();
        let good = vec![tables::olh_8x4(), tables::kron_olh_8x4(), tables::olh_8x4()];
        assert!(is_orthogonal(&bingham_general(&a, &good).unwrap()).orthogonal);
        let mut bad = good.clone();
        bad[1] = random_latin_hypercube(8, 4, 3).unwrap();
        assert!(!is_orthogonal(&bad[1]).orthogonal);
        assert!(!is_orthogonal(&bingham_general(&a, &bad).unwrap()).orthogonal);
        assert!(bingham_general(&a, &good[..2]).is_err());
    }

    #[test]
    fn prediction_matches_measurement() {
        let a = hadamard(4).unwrap().select_columns(&[0, 1, 2]).unwrap();
        for seed in 0..10 {
            let blocks: Vec<LevelMatrix> = (0..3)
                .map(|i| random_latin_hypercube(8, 2, seed * 3 + i).unwrap())
                .collect();
            let summaries: Vec<CorrelationScalars> = blocks
                .iter()
                .map(|b| CorrelationScalars::from(&correlation_matrix(b).unwrap()))
                .collect();
            let measured = correlation_matrix(&bingham_general(&a, &blocks).unwrap()).unwrap();
            let predicted = bingham_prediction(&summaries, 2);
            assert!((measured.rho_ave_sq - predicted.rho_ave_sq).abs() < 1e-12);
            assert!((measured.rho_max - predicted.rho_max).abs() < 1e-12);
        }
    }
}
