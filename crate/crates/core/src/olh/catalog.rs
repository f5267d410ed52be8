//! Best known lower bounds on the number of factors `k*` of an orthogonal
//! Latin hypercube with `n ≤ 256` runs, and the general lower-bound rule for
//! `n = 16m + j`.

use std::fmt;

use serde::Serialize;

use crate::design::LevelMatrix;
use crate::error::{Error, Result};
use crate::oa::galois_oa;

use super::{
    center_extension, oa_coupling_olh, orthogonal_design_template, sun_olh_even, sun_olh_odd,
    tables,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CatalogSource {
    AlgorithmicSearch,
    SteinbergRotation,
    OaCoupling,
    Sun,
    Kronecker,
    LowerBoundRule,
}

impl fmt::Display for CatalogSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::AlgorithmicSearch => "algorithmic-search",
            Self::SteinbergRotation => "steinberg-rotation",
            Self::OaCoupling => "oa-coupling",
            Self::Sun => "sun",
            Self::Kronecker => "kronecker",
            Self::LowerBoundRule => "lower-bound-rule",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OlhCatalogEntry {
    pub n: usize,
    pub k: usize,
    pub source: CatalogSource,
}

use CatalogSource::*;

const fn entry(n: usize, k: usize, source: CatalogSource) -> OlhCatalogEntry {
    OlhCatalogEntry { n, k, source }
}

const CATALOG: [OlhCatalogEntry; 48] = [
    entry(4, 2, AlgorithmicSearch),
    entry(5, 2, AlgorithmicSearch),
    entry(7, 3, AlgorithmicSearch),
    entry(8, 4, AlgorithmicSearch),
    entry(9, 5, AlgorithmicSearch),
    entry(11, 7, AlgorithmicSearch),
    entry(12, 6, AlgorithmicSearch),
    entry(13, 6, AlgorithmicSearch),
    entry(15, 6, AlgorithmicSearch),
    entry(16, 12, SteinbergRotation),
    entry(17, 6, AlgorithmicSearch),
    entry(19, 6, AlgorithmicSearch),
    entry(20, 6, AlgorithmicSearch),
    entry(21, 6, AlgorithmicSearch),
    entry(23, 6, AlgorithmicSearch),
    entry(24, 6, AlgorithmicSearch),
    entry(25, 12, OaCoupling),
    entry(32, 16, Sun),
    entry(33, 16, Sun),
    entry(48, 12, Kronecker),
    entry(49, 24, OaCoupling),
    entry(64, 32, Sun),
    entry(65, 32, Sun),
    entry(80, 12, Kronecker),
    entry(81, 50, OaCoupling),
    entry(96, 24, Kronecker),
    entry(97, 24, Kronecker),
    entry(112, 12, Kronecker),
    entry(113, 12, Kronecker),
    entry(121, 84, OaCoupling),
    entry(128, 64, Sun),
    entry(129, 64, Sun),
    entry(144, 24, Kronecker),
    entry(145, 12, Kronecker),
    entry(160, 24, Kronecker),
    entry(161, 24, Kronecker),
    entry(169, 84, OaCoupling),
    entry(176, 12, Kronecker),
    entry(177, 12, Kronecker),
    entry(192, 48, Kronecker),
    entry(193, 48, Kronecker),
    entry(208, 12, Kronecker),
    entry(209, 12, Kronecker),
    entry(224, 24, Kronecker),
    entry(225, 24, Kronecker),
    entry(240, 12, Kronecker),
    entry(241, 12, Kronecker),
    entry(256, 248, SteinbergRotation),
];

/// Every catalogued run size, in increasing order.
pub fn catalog_entries() -> &'static [OlhCatalogEntry] {
    &CATALOG
}

/// The largest bound the `n = 16m + j` rule gives, if any case applies.
/// Overlapping cases take the maximum.
pub fn lower_bound_rule(n: usize) -> Option<usize> {
    let (m, j) = (n / 16, n % 16);
    let mut best = None;
    let mut offer = |k: usize| best = Some(best.map_or(k, |b: usize| b.max(k)));
    if m >= 1 && ![2, 6, 10, 14].contains(&j) {
        offer(6);
    }
    if j == 11 {
        offer(7);
    }
    if m >= 2 && j <= 1 {
        offer(12);
    }
    if n >= 64 && n % 32 <= 1 {
        offer(24);
    }
    if n >= 128 && n % 64 <= 1 {
        offer(48);
    }
    best
}

/// Catalog lookup, falling back to the lower-bound rule for uncatalogued `n`.
pub fn best_known_bound(n: usize) -> Option<OlhCatalogEntry> {
    if let Some(e) = CATALOG.iter().find(|e| e.n == n) {
        return Some(*e);
    }
    lower_bound_rule(n).map(|k| entry(n, k, LowerBoundRule))
}

/// Builds an orthogonal Latin hypercube of `n` runs by the implemented
/// construction that reaches the most columns for that run size.
pub fn construct_best_known(n: usize) -> Result<LevelMatrix> {
    let unsupported = || Error::UnsupportedOrder(n);
    let coupling = |b: LevelMatrix| {
        let s = b.rows();
        let cols = s.div_ceil(2) * 2;
        oa_coupling_olh(&b, &galois_oa(s, cols)?)
    };
    match n {
        4 => Ok(orthogonal_design_template(4)?.latin()),
        5 => Ok(tables::olh_5x2()),
        7 => Ok(tables::olh_7x3()),
        8 => Ok(tables::olh_8x4()),
        9 => Ok(tables::olh_9x5()),
        11 => Ok(tables::olh_11x7()),
        16 => Ok(tables::olh_16x12()),
        17 => sun_olh_odd(3),
        25 => coupling(tables::olh_5x2()),
        49 => coupling(tables::olh_7x3()),
        81 => coupling(tables::olh_9x5()),
        121 => coupling(tables::olh_11x7()),
        _ if n >= 32 && n.is_power_of_two() => sun_olh_even(n.trailing_zeros() - 1),
        _ if n >= 33 && (n - 1).is_power_of_two() => sun_olh_odd((n - 1).trailing_zeros() - 1),
        _ if n > 32 && n % 2 == 1 => center_extension(&construct_best_known(n - 1)?),
        _ => Err(unsupported()),
    }
}
