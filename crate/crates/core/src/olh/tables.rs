//! Designs printed as worked examples and inputs to the constructions.
//!
//! Half-integer designs are stored as doubled levels.

use crate::design::LevelMatrix;
use crate::matrix::{IntMatrix, Matrix, RealMatrix};
use crate::oa::OrthogonalArray;

use super::SignMatrix;

/// A 5-run, 3-factor Latin hypercube.
const LH_5X3: [[i64; 3]; 5] = [[2, 0, -2], [1, -2, -1], [-2, 2, 0], [0, -1, 2], [-1, 1, 1]];

/// A unit-cube design built on [`LH_5X3`].
const DESIGN_5X3: [[f64; 3]; 5] = [
    [0.9253, 0.5117, 0.1610],
    [0.7621, 0.1117, 0.3081],
    [0.1241, 0.9878, 0.4473],
    [0.5744, 0.3719, 0.8270],
    [0.3181, 0.7514, 0.6916],
];

/// OA(9, 3^4, 2).
const OA_9X4: [[usize; 4]; 9] = [
    [1, 1, 1, 1],
    [1, 2, 2, 3],
    [1, 3, 3, 2],
    [2, 1, 2, 2],
    [2, 2, 3, 1],
    [2, 3, 1, 3],
    [3, 1, 3, 3],
    [3, 2, 1, 2],
    [3, 3, 2, 1],
];

/// An OA-based Latin hypercube built on [`OA_9X4`].
const OA_LH_9X4: [[i64; 4]; 9] = [
    [-2, -2, -4, -2],
    [-4, 0, 1, 2],
    [-3, 4, 2, 1],
    [-1, -4, -1, -1],
    [1, -1, 4, -3],
    [0, 2, -3, 4],
    [3, -3, 3, 3],
    [2, 1, -2, 0],
    [4, 3, 0, -4],
];

/// OLH(5, 2).
const OLH_5X2: [[i64; 2]; 5] = [[1, -2], [2, 1], [0, 0], [-1, 2], [-2, -1]];

/// OLH(7, 3).
const OLH_7X3: [[i64; 3]; 7] = [
    [-3, 3, 2],
    [-2, 0, -3],
    [-1, -2, -1],
    [0, -3, 1],
    [1, -1, 3],
    [2, 1, -2],
    [3, 2, 0],
];

/// OLH(8, 4), doubled.
const OLH_8X4_DOUBLED: [[i64; 4]; 8] = [
    [1, -3, 7, 5],
    [3, 1, 5, -7],
    [5, -7, -3, -1],
    [7, 5, -1, 3],
    [-7, -5, 1, -3],
    [-5, 7, 3, 1],
    [-3, -1, -5, 7],
    [-1, 3, -7, -5],
];

/// OLH(9, 5).
const OLH_9X5: [[i64; 5]; 9] = [
    [-4, -2, 0, -3, 3],
    [-3, 4, 2, 1, -2],
    [-2, -3, -4, -1, -3],
    [-1, 3, -2, 3, 4],
    [0, -4, 4, 4, 0],
    [1, 2, -1, 0, -4],
    [2, 0, 3, -2, -1],
    [3, 1, 1, -4, 2],
    [4, -1, -3, 2, 1],
];

/// OLH(11, 7).
const OLH_11X7: [[i64; 7]; 11] = [
    [-5, -4, -5, -5, -3, 0, 0],
    [-4, 2, -1, 3, 4, 5, 4],
    [-3, -2, 4, 5, -4, -2, -1],
    [-2, 3, -3, 4, 1, -4, -2],
    [-1, 4, 2, -4, 3, 2, -4],
    [0, -5, 5, -2, 5, -3, 2],
    [1, 5, 3, -3, -5, -1, 5],
    [2, -1, 1, 1, -2, 3, -5],
    [3, 0, 0, -1, 0, 1, -3],
    [4, 1, -4, 0, 2, -5, 1],
    [5, -3, -2, 2, -1, 4, 3],
];

/// A nearly orthogonal 13-run, 12-factor Latin hypercube.
const NOLH_13X12: [[i64; 12]; 13] = [
    [-6, -6, -5, -4, -5, -2, 2, 1, -3, -2, -1, -2],
    [-5, 5, 3, -5, 3, 4, -6, 0, -4, 1, -3, -1],
    [-4, 2, -4, 1, 2, 6, 5, -5, 6, 0, 1, 1],
    [-3, 1, 2, 4, -6, 1, -2, 6, 2, 3, 2, 6],
    [-2, -2, 6, -3, 6, -5, 3, 4, 4, -3, 3, 0],
    [-1, -5, 4, 6, 1, -1, 0, -4, 0, 6, -5, -3],
    [0, 6, 0, 3, -4, -6, -3, -3, 3, -5, 0, -4],
    [1, 0, -3, 5, 5, 0, 1, 2, -5, -6, -4, 5],
    [2, -1, -6, 0, 4, -4, -5, -2, -1, 5, 6, 2],
    [3, 4, 1, 2, -1, 2, 6, 3, -6, 2, 5, -6],
    [4, -4, 5, -2, -3, 3, -1, -6, -2, -4, 4, 3],
    [5, 3, -1, -6, -2, -3, 4, -1, 1, 4, -6, 4],
    [6, -3, -2, -1, 0, 5, -4, 5, 5, -1, -2, -5],
];

/// OLH(16, 12) obtained by rotation, doubled.
const OLH_16X12_DOUBLED: [[i64; 12]; 16] = [
    [-15, 5, 9, -3, 7, 11, -11, 7, -9, 3, -15, 5],
    [-13, 1, 1, 13, -7, -11, 11, -7, -1, -13, -13, 1],
    [-11, 7, -7, -11, 13, -1, -1, -13, 9, -3, 15, -5],
    [-9, 3, -15, 5, -13, 1, 1, 13, 1, 13, 13, -1],
    [-7, -11, 11, -7, 11, -7, 7, 11, 5, 15, -3, -9],
    [-5, -15, 3, 9, -11, 7, -7, -11, 13, -1, -1, -13],
    [-3, -9, -5, -15, 1, 13, 13, -1, -5, -15, 3, 9],
    [-1, -13, -13, 1, -1, -13, -13, 1, -13, 1, 1, 13],
    [1, 13, 13, -1, -9, 3, -15, 5, 11, -7, 7, 11],
    [3, 9, 5, 15, 9, -3, 15, -5, 3, 9, 5, 15],
    [5, 15, -3, -9, -3, -9, -5, -15, -11, 7, -7, -11],
    [7, 11, -11, 7, 3, 9, 5, 15, -3, -9, -5, -15],
    [9, -3, 15, -5, -5, -15, 3, 9, -7, -11, 11, -7],
    [11, -7, 7, 11, 5, 15, -3, -9, -15, 5, 9, -3],
    [13, -1, -1, -13, -15, 5, 9, -3, 7, 11, -11, 7],
    [15, -5, -9, 3, 15, -5, -9, 3, 15, -5, -9, 3],
];

/// A nearly orthogonal 16-run, 15-factor Latin hypercube, doubled.
const NOLH_16X15_DOUBLED: [[i64; 15]; 16] = [
    [-15, 15, -13, 13, -5, -13, 5, 3, -1, 5, -7, 5, -9, -9, 5],
    [-13, -15, -3, 3, 7, 3, 15, -11, 13, -5, 7, -13, -7, -3, -3],
    [-11, -9, -5, -11, -15, 13, -5, 11, -9, 9, 9, 3, -5, -1, -11],
    [-9, -1, 9, -15, -11, 1, -1, -13, 5, -1, -15, 7, 1, 3, 15],
    [-7, 1, -7, 7, 15, 15, -13, 9, -5, -13, -3, -1, -1, 7, 13],
    [-5, 13, 11, -5, 9, -7, -3, -9, -13, 11, 13, -9, -3, 13, 1],
    [-3, -5, 13, 15, -9, -9, -11, 1, 7, -9, 15, 11, 9, 1, -1],
    [-1, -11, 3, -7, 11, -15, 13, 15, -7, -3, -9, 9, 7, 9, -5],
    [1, 3, -9, -3, -1, -5, -15, -1, 11, 3, -11, -15, 15, 5, -15],
    [3, -3, 15, 11, 3, 9, 1, -7, -15, 1, -13, -3, 3, -15, -9],
    [5, 9, 7, -1, 5, 11, 9, 13, 15, 15, 5, 1, 11, -7, 9],
    [7, 7, -1, -13, 13, -1, -7, -5, 9, -7, 3, 15, -13, -11, -13],
    [9, 5, -11, -9, -7, -3, 7, -3, -11, -15, 11, -7, 13, -13, 7],
    [11, 11, 5, 5, -13, 7, 11, 5, 3, -11, -5, -5, -11, 15, -7],
    [13, -7, -15, 9, 1, 5, 3, -15, -3, 13, 1, 13, 5, 11, 3],
    [15, -13, 1, 1, -3, -11, -9, 7, 1, 7, -1, -11, -15, -5, 11],
];

/// A second-order orthogonal 17-run, 8-factor Latin hypercube.
const SUN_17X8: [[i64; 8]; 17] = [
    [1, 2, 3, 4, 5, 6, 7, 8],
    [2, -1, -4, 3, 6, -5, -8, 7],
    [3, 4, -1, -2, -7, -8, 5, 6],
    [4, -3, 2, -1, -8, 7, -6, 5],
    [5, 6, 7, 8, -1, -2, -3, -4],
    [6, -5, -8, 7, -2, 1, 4, -3],
    [7, 8, -5, -6, 3, 4, -1, -2],
    [8, -7, 6, -5, 4, -3, 2, -1],
    [0, 0, 0, 0, 0, 0, 0, 0],
    [-1, -2, -3, -4, -5, -6, -7, -8],
    [-2, 1, 4, -3, -6, 5, 8, -7],
    [-3, -4, 1, 2, 7, 8, -5, -6],
    [-4, 3, -2, 1, 8, -7, 6, -5],
    [-5, -6, -7, -8, 1, 2, 3, 4],
    [-6, 5, 8, -7, 2, -1, -4, 3],
    [-7, -8, 5, 6, -3, -4, 1, 2],
    [-8, 7, -6, 5, -4, 3, -2, 1],
];

/// An 8x4 column-orthogonal sign matrix used with [`KRON_OLH_8X4_DOUBLED`].
const KRON_SIGN_8X4: [[i64; 4]; 8] = [
    [1, 1, 1, 1],
    [1, 1, -1, -1],
    [1, -1, 1, -1],
    [1, -1, -1, 1],
    [1, 1, 1, 1],
    [1, 1, -1, -1],
    [1, -1, 1, -1],
    [1, -1, -1, 1],
];

/// OLH(8, 4), doubled, paired with [`KRON_SIGN_8X4`] for augmentation.
const KRON_OLH_8X4_DOUBLED: [[i64; 4]; 8] = [
    [1, -3, 7, 5],
    [3, 1, 5, -7],
    [5, -7, -3, -1],
    [7, 5, -1, 3],
    [-1, 3, -7, -5],
    [-3, -1, -5, 7],
    [-5, 7, 3, 1],
    [-7, -5, 1, -3],
];

/// U(6; 3^2) as 1-based symbols.
const UTYPE_6_3: [[usize; 2]; 6] = [[1, 1], [2, 2], [3, 3], [1, 3], [2, 1], [3, 2]];

/// U(6; 6^2) as 1-based symbols.
const UTYPE_6_6: [[usize; 2]; 6] = [[1, 3], [2, 5], [3, 1], [4, 6], [5, 2], [6, 4]];

fn int_matrix<const K: usize>(rows: &[[i64; K]]) -> IntMatrix {
    Matrix::from_rows(rows).expect("embedded table is rectangular")
}

fn latin_doubled<const K: usize>(rows: &[[i64; K]]) -> LevelMatrix {
    LevelMatrix::latin_from_doubled(int_matrix(rows)).expect("embedded table is a Latin hypercube")
}

fn latin_integers<const K: usize>(rows: &[[i64; K]]) -> LevelMatrix {
    let doubled: Vec<[i64; K]> = rows.iter().map(|r| r.map(|v| 2 * v)).collect();
    latin_doubled(&doubled)
}

pub fn lh_5x3() -> LevelMatrix {
    latin_integers(&LH_5X3)
}

pub fn design_5x3() -> RealMatrix {
    Matrix::from_rows(&DESIGN_5X3).expect("rectangular")
}

pub fn oa_9x4() -> OrthogonalArray {
    OrthogonalArray::symmetric(Matrix::from_rows(&OA_9X4).expect("rectangular"), 3, 2)
        .expect("embedded array has strength 2")
}

pub fn oa_lh_9x4() -> LevelMatrix {
    latin_integers(&OA_LH_9X4)
}

pub fn olh_5x2() -> LevelMatrix {
    latin_integers(&OLH_5X2)
}

pub fn olh_7x3() -> LevelMatrix {
    latin_integers(&OLH_7X3)
}

pub fn olh_8x4() -> LevelMatrix {
    latin_doubled(&OLH_8X4_DOUBLED)
}

pub fn olh_9x5() -> LevelMatrix {
    latin_integers(&OLH_9X5)
}

pub fn olh_11x7() -> LevelMatrix {
    latin_integers(&OLH_11X7)
}

pub fn nolh_13x12() -> LevelMatrix {
    latin_integers(&NOLH_13X12)
}

pub fn olh_16x12() -> LevelMatrix {
    latin_doubled(&OLH_16X12_DOUBLED)
}

pub fn nolh_16x15() -> LevelMatrix {
    latin_doubled(&NOLH_16X15_DOUBLED)
}

pub fn sun_17x8() -> LevelMatrix {
    latin_integers(&SUN_17X8)
}

pub fn kron_sign_8x4() -> SignMatrix {
    SignMatrix::new(int_matrix(&KRON_SIGN_8X4)).expect("embedded matrix is +-1")
}

pub fn kron_olh_8x4() -> LevelMatrix {
    latin_doubled(&KRON_OLH_8X4_DOUBLED)
}

pub fn utype_6_3() -> OrthogonalArray {
    OrthogonalArray::symmetric(Matrix::from_rows(&UTYPE_6_3).expect("rectangular"), 3, 1)
        .expect("balanced")
}

pub fn utype_6_6() -> OrthogonalArray {
    OrthogonalArray::symmetric(Matrix::from_rows(&UTYPE_6_6).expect("rectangular"), 6, 1)
        .expect("balanced")
}

/// A named embedded table.
#[derive(Debug, Clone)]
pub enum Table {
    Levels(LevelMatrix),
    Design(RealMatrix),
    Array(OrthogonalArray),
    Signs(SignMatrix),
}

/// Identifiers accepted by [`table`].
pub const TABLE_IDS: &[&str] = &[
    "lh-5x3",
    "design-5x3",
    "oa-9x4",
    "oa-lh-9x4",
    "olh-5x2",
    "olh-7x3",
    "olh-8x4",
    "olh-9x5",
    "olh-11x7",
    "nolh-13x12",
    "olh-16x12",
    "nolh-16x15",
    "sun-17x8",
    "kron-sign-8x4",
    "kron-olh-8x4",
    "utype-6x2-3",
    "utype-6x2-6",
];

pub fn table(id: &str) -> Option<Table> {
    Some(match id {
        "lh-5x3" => Table::Levels(lh_5x3()),
        "design-5x3" => Table::Design(design_5x3()),
        "oa-9x4" => Table::Array(oa_9x4()),
        "oa-lh-9x4" => Table::Levels(oa_lh_9x4()),
        "olh-5x2" => Table::Levels(olh_5x2()),
        "olh-7x3" => Table::Levels(olh_7x3()),
        "olh-8x4" => Table::Levels(olh_8x4()),
        "olh-9x5" => Table::Levels(olh_9x5()),
        "olh-11x7" => Table::Levels(olh_11x7()),
        "nolh-13x12" => Table::Levels(nolh_13x12()),
        "olh-16x12" => Table::Levels(olh_16x12()),
        "nolh-16x15" => Table::Levels(nolh_16x15()),
        "sun-17x8" => Table::Levels(sun_17x8()),
        "kron-sign-8x4" => Table::Signs(kron_sign_8x4()),
        "kron-olh-8x4" => Table::Levels(kron_olh_8x4()),
        "utype-6x2-3" => Table::Array(utype_6_3()),
        "utype-6x2-6" => Table::Array(utype_6_6()),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlation::{is_orthogonal, second_order_check};

    #[test]
    fn every_id_resolves() {
        for id in TABLE_IDS {
            assert!(table(id).is_some(), "{id}");
        }
        assert!(table("nope").is_none());
    }

    #[test]
    fn printed_olhs_are_orthogonal() {
        for l in [
            olh_5x2(),
            olh_7x3(),
            olh_8x4(),
            olh_9x5(),
            olh_11x7(),
            olh_16x12(),
            kron_olh_8x4(),
        ] {
            assert!(is_orthogonal(&l).orthogonal, "{}x{}", l.rows(), l.cols());
        }
        assert!(second_order_check(&sun_17x8()).unwrap().second_order);
        assert!(!is_orthogonal(&nolh_13x12()).orthogonal);
        assert!(kron_sign_8x4().is_column_orthogonal());
    }

    #[test]
    fn oa_lh_collapses_to_its_array() {
        let l = oa_lh_9x4();
        let oa = oa_9x4();
        for i in 0..9 {
            for j in 0..4 {
                assert_eq!(l.rank_at(i, j).unwrap() / 3 + 1, oa.symbol(i, j));
            }
        }
    }
}
