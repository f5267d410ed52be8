//! Finite fields GF(p^e) and the classical OA(q², q^{q+1}, 2).

use crate::error::{Error, Result};
use crate::matrix::Matrix;

use super::OrthogonalArray;

/// Addition and multiplication tables of GF(q). Elements are `0..q`, read as
/// base-`p` digit vectors of polynomial coefficients.
#[derive(Debug, Clone)]
pub struct GaloisField {
    order: usize,
    add: Vec<usize>,
    mul: Vec<usize>,
}

fn prime_power(q: usize) -> Option<(usize, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

fn digits(mut v: usize, p: usize, len: usize) -> Vec<usize> {
    (0..len)
        .map(|_| {
            let d = v % p;
            v /= p;
            d
        })
        .collect()
}

fn from_digits(d: &[usize], p: usize) -> usize {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

/// Product of two degree-<e polynomials reduced modulo the monic `modulus`
/// (given by its `e` low coefficients).
fn poly_mul_mod(a: &[usize], b: &[usize], modulus: &[usize], p: usize) -> Vec<usize> {
    let e = modulus.len();
    let mut prod = vec![0; 2 * e];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for deg in (e..2 * e).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        prod[deg] = 0;
        // x^e = -(modulus low terms)
        for (i, &m) in modulus.iter().enumerate() {
            let idx = deg - e + i;
            prod[idx] = (prod[idx] + c * (p - m) % p) % p;
        }
    }
    prod.truncate(e);
    prod
}

impl GaloisField {
    pub fn new(order: usize) -> Result<Self> {
        let (p, e) = prime_power(order)
            .ok_or_else(|| Error::InvalidParameter(format!("{order} is not a prime power")))?;
        let e = e as usize;
        let add = (0..order * order)
            .map(|idx| {
                let (a, b) = (digits(idx / order, p, e), digits(idx % order, p, e));
                let s: Vec<usize> = a.iter().zip(&b).map(|(x, y)| (x + y) % p).collect();
                from_digits(&s, p)
            })
            .collect();
        // smallest monic modulus without zero divisors
        for candidate in 0..order {
            let modulus = digits(candidate, p, e);
            let mul: Vec<usize> = (0..order * order)
                .map(|idx| {
                    let (a, b) = (digits(idx / order, p, e), digits(idx % order, p, e));
                    from_digits(&poly_mul_mod(&a, &b, &modulus, p), p)
                })
                .collect();
            let field = (1..order).all(|a| (1..order).all(|b| mul[a * order + b] != 0));
            if field {
                return Ok(Self { order, add, mul });
            }
        }
        unreachable!("an irreducible polynomial of every degree exists")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.order + b]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }
}

/// OA(q², q^k, 2) for a prime power `q` and `k ≤ q + 1`. Rows are indexed by
/// field pairs `(a, b)`; the columns are `a`, `b` and `b + λa` for `λ ≠ 0`.
pub fn galois_oa(q: usize, k: usize) -> Result<OrthogonalArray> {
    let field = GaloisField::new(q)?;
    if k == 0 || k > q + 1 {
        return Err(Error::InvalidParameter(format!(
            "a strength-2 array with {q} symbols has at most {} columns, {k} requested",
            q + 1
        )));
    }
    let symbols = Matrix::from_fn(q * q, k, |row, col| {
        let (a, b) = (row / q, row % q);
        let v = match col {
            0 => a,
            1 => b,
            c => field.add(b, field.mul(c - 1, a)),
        };
        v + 1
    });
    OrthogonalArray::symmetric(symbols, q, 2)
}
