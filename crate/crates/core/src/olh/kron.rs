//! Kronecker-type constructions `L = A⊗B + n₂·E⊗F`, the augmented
//! `(L, U)` design, the run-size doubling pipeline and the near-orthogonality
//! weights.
//!
//! Everything runs on doubled levels: `2L = A⊗(2B) + n₂·(2E)⊗F`.

use serde::Serialize;

use crate::correlation::is_orthogonal;
use crate::design::{validate_latin_hypercube, LevelMatrix};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

use super::{CorrelationScalars, SignMatrix};

/// Which hypotheses of the orthogonality theorem hold for `(A, B, E, F)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct KronConditions {
    /// (i) `A` and `F` are column-orthogonal.
    pub sign_orthogonal: bool,
    /// (ii) `B` and `E` are orthogonal Latin hypercubes.
    pub olh_inputs: bool,
    /// (iii) `AᵀE = 0` or `BᵀF = 0`.
    pub cross_zero: bool,
    /// (iv)(a): `e_{p₁i} = -e_{p₂i}` implies `a_{p₁i} = a_{p₂i}`.
    pub mirror_a_e: bool,
    /// (iv)(b): `b_{q₁j} = -b_{q₂j}` implies `f_{q₁j} = f_{q₂j}`.
    pub mirror_b_f: bool,
}

impl KronConditions {
    pub fn latin(&self) -> bool {
        self.mirror_a_e || self.mirror_b_f
    }

    pub fn all(&self) -> bool {
        self.sign_orthogonal && self.olh_inputs && self.cross_zero && self.latin()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KronLabel {
    OrthogonalLatinHypercube,
    LatinHypercube,
    Matrix,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KronOutput {
    pub design: LevelMatrix,
    pub conditions: KronConditions,
    pub label: KronLabel,
}

fn mirror_condition(levels: &IntMatrix, signs: &IntMatrix) -> bool {
    (0..levels.cols()).all(|j| {
        let col = levels.column(j);
        (0..col.len()).all(|p1| {
            (p1 + 1..col.len())
                .all(|p2| col[p1] != -col[p2] || signs.get(p1, j) == signs.get(p2, j))
        })
    })
}

fn is_olh(l: &LevelMatrix) -> bool {
    validate_latin_hypercube(l).passed && (l.cols() < 2 || is_orthogonal(l).orthogonal)
}

pub fn check_conditions(
    a: &SignMatrix,
    b: &LevelMatrix,
    e: &LevelMatrix,
    f: &SignMatrix,
) -> Result<KronConditions> {
    check_shapes(a, b, e, f)?;
    Ok(KronConditions {
        sign_orthogonal: a.is_column_orthogonal() && f.is_column_orthogonal(),
        olh_inputs: is_olh(b) && is_olh(e),
        cross_zero: a.matrix().cross_product(e.doubled())?.is_zero()
            || b.doubled().cross_product(f.matrix())?.is_zero(),
        mirror_a_e: mirror_condition(e.doubled(), a.matrix()),
        mirror_b_f: mirror_condition(b.doubled(), f.matrix()),
    })
}

fn check_shapes(a: &SignMatrix, b: &LevelMatrix, e: &LevelMatrix, f: &SignMatrix) -> Result<()> {
    if (a.rows(), a.cols()) != (e.rows(), e.cols()) || (b.rows(), b.cols()) != (f.rows(), f.cols())
    {
        return Err(Error::ShapeMismatch(format!(
            "A {}x{}, E {}x{}, B {}x{}, F {}x{}",
            a.rows(),
            a.cols(),
            e.rows(),
            e.cols(),
            b.rows(),
            b.cols(),
            f.rows(),
            f.cols()
        )));
    }
    Ok(())
}

fn label(design: &LevelMatrix, conditions: &KronConditions) -> KronLabel {
    if conditions.all() {
        KronLabel::OrthogonalLatinHypercube
    } else if validate_latin_hypercube(design).passed {
        KronLabel::LatinHypercube
    } else {
        KronLabel::Matrix
    }
}

/// `L = A⊗B + n₂·E⊗F`, `n₁n₂ × k₁k₂`. Unmet conditions lower the label
/// rather than failing.
pub fn kron_construct(
    a: &SignMatrix,
    b: &LevelMatrix,
    e: &LevelMatrix,
    f: &SignMatrix,
) -> Result<KronOutput> {
    let conditions = check_conditions(a, b, e, f)?;
    let n2 = b.rows() as i64;
    let doubled = a
        .matrix()
        .kron(b.doubled())
        .add(&e.doubled().kron(f.matrix()).scale(n2))?;
    let design = LevelMatrix::latin_from_doubled(doubled)?;
    let label = label(&design, &conditions);
    Ok(KronOutput {
        design,
        conditions,
        label,
    })
}

/// `(L, U)` with `U = -n₁·A⊗B + E⊗F`; needs `n₁ = n₂`. The result has
/// `2k₁k₂` columns.
pub fn kron_augmented(
    a: &SignMatrix,
    b: &LevelMatrix,
    e: &LevelMatrix,
    f: &SignMatrix,
) -> Result<KronOutput> {
    if a.rows() != b.rows() {
        return Err(Error::ShapeMismatch(format!(
            "augmentation needs n1 = n2, got {} and {}",
            a.rows(),
            b.rows()
        )));
    }
    let l = kron_construct(a, b, e, f)?;
    let n1 = a.rows() as i64;
    let u = a
        .matrix()
        .kron(b.doubled())
        .scale(-n1)
        .add(&e.doubled().kron(f.matrix()))?;
    let design = LevelMatrix::latin_from_doubled(IntMatrix::hstack(&[l.design.doubled(), &u])?)?;
    let conditions = l.conditions;
    let label = if conditions.all() && is_orthogonal(&design).orthogonal {
        KronLabel::OrthogonalLatinHypercube
    } else if validate_latin_hypercube(&design).passed {
        KronLabel::LatinHypercube
    } else {
        KronLabel::Matrix
    };
    Ok(KronOutput {
        design,
        conditions,
        label,
    })
}

const TEMPLATE_2: [[i64; 1]; 1] = [[1]];
const TEMPLATE_4: [[i64; 2]; 2] = [[1, 2], [2, -1]];
const TEMPLATE_8: [[i64; 4]; 4] = [[1, -2, 4, 3], [2, 1, 3, -4], [3, -4, -2, -1], [4, 3, -1, 2]];
const TEMPLATE_16: [[i64; 8]; 8] = [
    [1, -2, -4, -3, -8, 7, 5, 6],
    [2, 1, -3, 4, -7, -8, -6, 5],
    [3, -4, 2, 1, -6, -5, 7, -8],
    [4, 3, 1, -2, -5, 6, -8, -7],
    [5, -6, -8, 7, 4, 3, -1, -2],
    [6, 5, -7, -8, 3, -4, 2, -1],
    [7, -8, 6, -5, 2, -1, -3, 4],
    [8, 7, 5, 6, 1, 2, 4, 3],
];

/// An orthogonal design `(X; -X)` of order 2, 4, 8 or 16 in `m/2` variables.
/// Entry `±i` of the pattern stands for `±x_i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrthogonalDesignTemplate {
    order: usize,
    top: IntMatrix,
}

impl OrthogonalDesignTemplate {
    pub fn order(&self) -> usize {
        self.order
    }

    /// The full `m × m/2` pattern.
    pub fn pattern(&self) -> IntMatrix {
        IntMatrix::vstack(&[&self.top, &self.top.negated()]).expect("same width")
    }

    /// Substitutes `x_i = values[i-1]`.
    pub fn instantiate(&self, values: &[i64]) -> Result<IntMatrix> {
        if values.len() != self.order / 2 {
            return Err(Error::ShapeMismatch(format!(
                "template of order {} takes {} values, got {}",
                self.order,
                self.order / 2,
                values.len()
            )));
        }
        Ok(self
            .pattern()
            .map(|v| v.signum() * values[v.unsigned_abs() as usize - 1]))
    }

    /// `S`: the top half with every `x_i = 1`.
    pub fn top_signs(&self) -> SignMatrix {
        SignMatrix::new(self.top.map(i64::signum)).expect("nonzero pattern")
    }

    /// `E`: the full design with `x_i = (2i-1)/2`, an orthogonal Latin hypercube.
    pub fn latin(&self) -> LevelMatrix {
        let values: Vec<i64> = (1..=self.order as i64 / 2).map(|i| 2 * i - 1).collect();
        LevelMatrix::latin_from_doubled(self.instantiate(&values).expect("matching length"))
            .expect("Latin shape")
    }
}

pub fn orthogonal_design_template(order: usize) -> Result<OrthogonalDesignTemplate> {
    let top = match order {
        2 => IntMatrix::from_rows(&TEMPLATE_2)?,
        4 => IntMatrix::from_rows(&TEMPLATE_4)?,
        8 => IntMatrix::from_rows(&TEMPLATE_8)?,
        16 => IntMatrix::from_rows(&TEMPLATE_16)?,
        _ => return Err(Error::UnsupportedOrder(order)),
    };
    Ok(OrthogonalDesignTemplate { order, top })
}

/// From an `OLH(n, k)` and a Hadamard matrix of order `n`, the designs
/// `OLH(2n, k)`, `OLH(4n, 2k)`, `OLH(8n, 4k)` and `OLH(16n, 8k)`.
pub fn doubling_pipeline(b: &LevelMatrix, hadamard: &SignMatrix) -> Result<Vec<KronOutput>> {
    let n = b.rows();
    if !n.is_multiple_of(4) {
        return Err(Error::InvalidParameter(format!(
            "run size {n} is not a multiple of 4"
        )));
    }
    if hadamard.rows() != n || hadamard.cols() != n {
        return Err(Error::ShapeMismatch(format!(
            "need a Hadamard matrix of order {n}, got {}x{}",
            hadamard.rows(),
            hadamard.cols()
        )));
    }
    let f = hadamard.select_columns(&(0..b.cols()).collect::<Vec<_>>())?;
    [2, 4, 8, 16]
        .into_iter()
        .map(|m| {
            let template = orthogonal_design_template(m)?;
            let s = template.top_signs();
            let a = SignMatrix::new(IntMatrix::vstack(&[s.matrix(), s.matrix()])?)?;
            kron_construct(&a, b, &template.latin(), &f)
        })
        .collect()
}

/// `(w₁, w₂, w₃, w₄)` for `n = n₁n₂` runs and `k = k₁k₂` columns.
pub fn near_orth_weights(n1: usize, n2: usize, k1: usize, k2: usize) -> [f64; 4] {
    let (n1, n2, k1, k2) = (n1 as f64, n2 as f64, k1 as f64, k2 as f64);
    let n = n1 * n2;
    let denom = (n * n - 1.0).powi(2);
    let k = k1 * k2 - 1.0;
    let (w1, w2) = if k > 0.0 {
        (
            (k2 - 1.0) * (n2 * n2 - 1.0).powi(2) / (k * denom),
            n2.powi(4) * (k1 - 1.0) * (n1 * n1 - 1.0).powi(2) / (k * denom),
        )
    } else {
        (0.0, 0.0)
    };
    [
        w1,
        w2,
        (n2 * n2 - 1.0) / (n * n - 1.0),
        n2 * n2 * (n1 * n1 - 1.0) / (n * n - 1.0),
    ]
}

/// Predicted `ρ²_ave` and `ρ_M` of `L` from those of `B` and `E`. A factor
/// with a single column contributes zeros.
pub fn near_orth_prediction(
    b: CorrelationScalars,
    e: CorrelationScalars,
    n1: usize,
    n2: usize,
    k1: usize,
    k2: usize,
) -> CorrelationScalars {
    let [w1, w2, w3, w4] = near_orth_weights(n1, n2, k1, k2);
    CorrelationScalars {
        rho_max: (w3 * b.rho_max).max(w4 * e.rho_max),
        rho_ave_sq: w1 * b.rho_ave_sq + w2 * e.rho_ave_sq,
    }
}
