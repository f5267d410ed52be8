//! Orthogonal and nearly orthogonal Latin hypercube constructions.

mod bingham;
mod catalog;
mod coupling;
mod hadamard;
mod kron;
mod sun;
pub mod tables;

pub use bingham::{bingham_general, bingham_kronecker, bingham_prediction};
pub use catalog::{
    best_known_bound, catalog_entries, construct_best_known, lower_bound_rule, CatalogSource,
    OlhCatalogEntry,
};
pub use coupling::{oa_coupling_olh, oa_coupling_predicted_correlation};
pub use hadamard::{hadamard, paley_hadamard, sylvester_hadamard};
pub use kron::{
    check_conditions, doubling_pipeline, kron_augmented, kron_construct, near_orth_prediction,
    near_orth_weights, orthogonal_design_template, KronConditions, KronLabel, KronOutput,
    OrthogonalDesignTemplate,
};
pub use sun::{sun_olh_even, sun_olh_odd, sun_recursive};

use serde::Serialize;

use crate::correlation::CorrelationSummary;
use crate::design::LevelMatrix;
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// A matrix of `±1` entries.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignMatrix(IntMatrix);

impl SignMatrix {
    pub fn new(m: IntMatrix) -> Result<Self> {
        if let Some(bad) = m.as_slice().iter().find(|v| v.abs() != 1) {
            return Err(Error::InvalidParameter(format!("sign matrix entry {bad}")));
        }
        Ok(Self(m))
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Self::new(IntMatrix::from_rows(rows)?)
    }

    /// The all-ones column of length `n`.
    pub fn ones(n: usize) -> Self {
        Self(IntMatrix::filled(n, 1, 1))
    }

    pub fn rows(&self) -> usize {
        self.0.rows()
    }

    pub fn cols(&self) -> usize {
        self.0.cols()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn select_columns(&self, indices: &[usize]) -> Result<Self> {
        Ok(Self(self.0.select_columns(indices)?))
    }

    /// `XᵀX = nI`.
    pub fn is_column_orthogonal(&self) -> bool {
        let g = self.0.cross_product(&self.0).expect("same matrix");
        let n = self.rows() as i128;
        (0..self.cols())
            .all(|a| (0..self.cols()).all(|b| g.get(a, b) == if a == b { n } else { 0 }))
    }
}

/// The two scalar correlation summaries, as measured or as predicted by a
/// construction's closed form.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct CorrelationScalars {
    pub rho_max: f64,
    pub rho_ave_sq: f64,
}

impl From<&CorrelationSummary> for CorrelationScalars {
    fn from(s: &CorrelationSummary) -> Self {
        Self {
            rho_max: s.rho_max,
            rho_ave_sq: s.rho_ave_sq,
        }
    }
}

/// Whether an orthogonal Latin hypercube with more than one factor exists:
/// exactly when `n ≥ 4` and `n ≢ 2 (mod 4)`.
pub fn exists_olh(n: usize) -> bool {
    n >= 4 && n % 4 != 2
}

/// Appends a center run to an even-run Latin hypercube: each half-integer
/// level `l` moves to `l + sign(l)/2` and a row of zeros is added, giving a
/// Latin hypercube of `n + 1` runs. Orthogonality is not implied in general
/// and must be checked; it holds for the Kronecker-type constructions here.
pub fn center_extension(design: &LevelMatrix) -> Result<LevelMatrix> {
    if !design.is_latin_shape() || !design.rows().is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "center extension needs an even-run Latin hypercube, got {} runs on {} levels",
            design.rows(),
            design.levels()
        )));
    }
    let moved = design.doubled().map(|d| d + d.signum());
    let zero = IntMatrix::filled(1, design.cols(), 0);
    LevelMatrix::latin_from_doubled(IntMatrix::vstack(&[&moved, &zero])?)
}

/// Flips the signs of the top half of the rows.
pub(crate) fn star(m: &IntMatrix) -> IntMatrix {
    let half = m.rows() / 2;
    IntMatrix::from_fn(m.rows(), m.cols(), |i, j| {
        if i < half {
            -m.get(i, j)
        } else {
            m.get(i, j)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlation::is_orthogonal;
    use crate::design::validate_latin_hypercube;

    #[test]
    fn existence_rule() {
        for n in [0, 1, 2, 3, 6, 10, 14, 62] {
            assert!(!exists_olh(n), "{n}");
        }
        for n in [4, 5, 7, 8, 9, 11, 12, 13, 64] {
            assert!(exists_olh(n), "{n}");
        }
    }

    #[test]
    fn center_extension_of_even_sun_is_odd_sun() {
        for c in 1..=4 {
            let ext = center_extension(&sun_olh_even(c).unwrap()).unwrap();
            assert!(validate_latin_hypercube(&ext).passed);
            assert!(is_orthogonal(&ext).orthogonal, "c={c}");
        }
        assert!(center_extension(&tables::olh_5x2()).is_err());
    }

    #[test]
    fn sign_matrix_checks() {
        assert!(SignMatrix::from_rows(&[[1, 0]]).is_err());
        let h = SignMatrix::from_rows(&[[1, 1], [1, -1]]).unwrap();
        assert!(h.is_column_orthogonal());
        assert!(!SignMatrix::from_rows(&[[1, 1], [1, 1]])
            .unwrap()
            .is_column_orthogonal());
    }
}
