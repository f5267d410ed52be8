//! Orthogonal-array coupling: an `n`-run Latin hypercube `B` with `q` columns
//! and an `OA(n², n^{2f}, 2)` give an `n²`-run Latin hypercube with `2qf`
//! columns whose correlation matrix is `R(B) ⊗ I_{2f}`.

use crate::design::LevelMatrix;
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::oa::OrthogonalArray;

use super::CorrelationScalars;

/// Builds the `n² × 2qf` design. For each column `j` of `B` the array's
/// symbols `1..n` are replaced by `b_{1j}, …, b_{nj}`; each two-column block
/// `[x, y]` then becomes `[x + n·y, -n·x + y]`.
pub fn oa_coupling_olh(b: &LevelMatrix, array: &OrthogonalArray) -> Result<LevelMatrix> {
    let n = b.rows();
    if !b.is_latin_shape() {
        return Err(Error::IncompatibleArray(format!(
            "B must be a Latin hypercube, has {} levels on {n} runs",
            b.levels()
        )));
    }
    if array.symmetric_levels() != Some(n) || array.rows() != n * n {
        return Err(Error::IncompatibleArray(format!(
            "need OA({}, {n}^2f, 2), got {} runs with levels {:?}",
            n * n,
            array.rows(),
            array.levels()
        )));
    }
    if !array.cols().is_multiple_of(2) || array.cols() == 0 {
        return Err(Error::IncompatibleArray(format!(
            "need an even number of columns, got {}",
            array.cols()
        )));
    }
    if array.strength() < 2 {
        return Err(Error::IncompatibleArray(format!(
            "need strength 2, got {}",
            array.strength()
        )));
    }
    let (q, f) = (b.cols(), array.cols() / 2);
    let big_n = n * n;
    let scale = n as i64;
    let out = IntMatrix::from_fn(big_n, 2 * q * f, |i, c| {
        let j = c / (2 * f);
        let block = (c % (2 * f)) / 2;
        let sub = |col: usize| b.doubled_at(array.symbol(i, col) - 1, j);
        let (x, y) = (sub(2 * block), sub(2 * block + 1));
        if c % 2 == 0 {
            x + scale * y
        } else {
            -scale * x + y
        }
    });
    LevelMatrix::latin_from_doubled(out)
}

/// `ρ_M` is inherited from `B`; `ρ²_ave` shrinks by `(q-1)/(2qf-1)`.
pub fn oa_coupling_predicted_correlation(
    b_rho_max: f64,
    b_rho_ave_sq: f64,
    q: usize,
    f: usize,
) -> CorrelationScalars {
    let shrink = (q as f64 - 1.0) / (2.0 * (q * f) as f64 - 1.0);
    CorrelationScalars {
        rho_max: if q > 1 { b_rho_max } else { 0.0 },
        rho_ave_sq: shrink * b_rho_ave_sq,
    }
}
