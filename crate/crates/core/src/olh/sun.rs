//! Recursive second-order orthogonal Latin hypercubes with `2^c` factors.

use crate::design::LevelMatrix;
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

use super::{star, SignMatrix};

/// `(S_c, T_c)`, both `2^c × 2^c`. `T_c` holds integer levels; the absolute
/// values in each of its columns are a permutation of `1, …, 2^c`.
pub fn sun_recursive(c: u32) -> Result<(SignMatrix, IntMatrix)> {
    if c == 0 || c > 20 {
        return Err(Error::InvalidParameter(format!(
            "recursion depth c = {c}, need 1..=20"
        )));
    }
    let mut s = IntMatrix::from_rows(&[[1, 1], [1, -1]])?;
    let mut t = IntMatrix::from_rows(&[[1, 2], [2, -1]])?;
    for step in 2..=c {
        let half = 1_i64 << (step - 1);
        let s_star = star(&s);
        let t_star = star(&t);
        let t_next = IntMatrix::vstack(&[
            &IntMatrix::hstack(&[&t, &t_star.add(&s_star.scale(half))?.negated()])?,
            &IntMatrix::hstack(&[&t.add(&s.scale(half))?, &t_star])?,
        ])?;
        let s_next = IntMatrix::vstack(&[
            &IntMatrix::hstack(&[&s, &s_star.negated()])?,
            &IntMatrix::hstack(&[&s, &s_star])?,
        ])?;
        s = s_next;
        t = t_next;
    }
    Ok((SignMatrix::new(s)?, t))
}

/// `(T_c; 0; -T_c)`: `2^{c+1} + 1` runs.
pub fn sun_olh_odd(c: u32) -> Result<LevelMatrix> {
    let (_, t) = sun_recursive(c)?;
    let doubled = t.scale(2);
    let zero = IntMatrix::filled(1, t.cols(), 0);
    LevelMatrix::latin_from_doubled(IntMatrix::vstack(&[&doubled, &zero, &doubled.negated()])?)
}

/// `(H_c; -H_c)` with `H_c = T_c - S_c/2`: `2^{c+1}` runs on half-integer levels.
pub fn sun_olh_even(c: u32) -> Result<LevelMatrix> {
    let (s, t) = sun_recursive(c)?;
    let h = t.scale(2).add(&s.matrix().negated())?;
    LevelMatrix::latin_from_doubled(IntMatrix::vstack(&[&h, &h.negated()])?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlation::second_order_check;
    use crate::design::validate_latin_hypercube;
    use crate::olh::tables;

    #[test]
    fn first_step_matches_base_case() {
        let (s, t) = sun_recursive(1).unwrap();
        assert_eq!(s.matrix().as_slice(), &[1, 1, 1, -1]);
        assert_eq!(t.as_slice(), &[1, 2, 2, -1]);
        let l = sun_olh_odd(1).unwrap();
        let expected =
            LevelMatrix::latin_from_integers(&[[1, 2], [2, -1], [0, 0], [-1, -2], [-2, 1]])
                .unwrap();
        assert_eq!(l, expected);
    }

    #[test]
    fn odd_c3_is_the_17_run_design() {
        let (_, t) = sun_recursive(3).unwrap();
        let printed = tables::sun_17x8();
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(2 * t.get(i, j), printed.doubled_at(i, j));
            }
        }
        assert_eq!(sun_olh_odd(3).unwrap(), printed);
    }

    #[test]
    fn columns_of_t_are_signed_permutations() {
        for c in 1..=5 {
            let (s, t) = sun_recursive(c).unwrap();
            let m = 1_i64 << c;
            assert!(s.is_column_orthogonal());
            for j in 0..t.cols() {
                let mut col: Vec<i64> = t.column(j).iter().map(|v| v.abs()).collect();
                col.sort_unstable();
                let expected: Vec<i64> = (1..=m).collect();
                assert_eq!(col, expected, "c={c} column {j}");
            }
        }
    }

    #[test]
    fn both_variants_are_second_order_orthogonal() {
        for c in 1..=4 {
            for l in [sun_olh_odd(c).unwrap(), sun_olh_even(c).unwrap()] {
                assert!(validate_latin_hypercube(&l).passed, "c={c}");
                assert!(second_order_check(&l).unwrap().second_order, "c={c}");
            }
        }
        let even = sun_olh_even(2).unwrap();
        assert_eq!((even.rows(), even.cols()), (8, 4));
        assert!(sun_recursive(0).is_err());
    }
}
