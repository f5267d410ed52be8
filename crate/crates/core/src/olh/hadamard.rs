//! Hadamard matrices from Sylvester doubling and the Paley I construction.

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::oa::GaloisField;

use super::SignMatrix;

/// `H_{2m} = [[H, H], [H, -H]]` starting from `[1]`; `order` must be a power of two.
pub fn sylvester_hadamard(order: usize) -> Result<SignMatrix> {
    if order == 0 || !order.is_power_of_two() {
        return Err(Error::UnsupportedOrder(order));
    }
    let mut h = IntMatrix::filled(1, 1, 1);
    let base = IntMatrix::from_rows(&[[1, 1], [1, -1]])?;
    while h.rows() < order {
        h = base.kron(&h);
    }
    SignMatrix::new(h)
}

/// Paley I: for a prime power `q ≡ 3 (mod 4)`, a Hadamard matrix of order `q + 1`.
pub fn paley_hadamard(q: usize) -> Result<SignMatrix> {
    if q % 4 != 3 {
        return Err(Error::UnsupportedOrder(q + 1));
    }
    let field = GaloisField::new(q).map_err(|_| Error::UnsupportedOrder(q + 1))?;
    let mut is_square = vec![false; q];
    for x in 1..q {
        is_square[field.mul(x, x)] = true;
    }
    let mut negate = vec![0; q];
    for x in 0..q {
        negate[x] = (0..q)
            .find(|&y| field.add(x, y) == 0)
            .expect("additive inverse");
    }
    let chi = |x: usize| -> i64 {
        if x == 0 {
            0
        } else if is_square[x] {
            1
        } else {
            -1
        }
    };
    let n = q + 1;
    let h = IntMatrix::from_fn(n, n, |i, j| {
        let skew = match (i, j) {
            (0, 0) => 0,
            (0, _) => 1,
            (_, 0) => -1,
            _ => chi(field.add(i - 1, negate[j - 1])),
        };
        skew + i64::from(i == j)
    });
    SignMatrix::new(h)
}

/// A Hadamard matrix of the given order: Sylvester for powers of two, Paley I
/// when `order - 1` is a prime power `≡ 3 (mod 4)`, otherwise Sylvester
/// doubling of a smaller order built the same way.
pub fn hadamard(order: usize) -> Result<SignMatrix> {
    if order == 0 {
        return Err(Error::UnsupportedOrder(order));
    }
    if order.is_power_of_two() {
        return sylvester_hadamard(order);
    }
    if !order.is_multiple_of(4) {
        return Err(Error::UnsupportedOrder(order));
    }
    if let Ok(h) = paley_hadamard(order - 1) {
        return Ok(h);
    }
    let half = hadamard(order / 2).map_err(|_| Error::UnsupportedOrder(order))?;
    let base = IntMatrix::from_rows(&[[1, 1], [1, -1]])?;
    SignMatrix::new(base.kron(half.matrix()))
}
