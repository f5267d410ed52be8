//! Elementary intervals, `(t, m, s)`-net and `(t, s)`-sequence verification,
//! and small radical-inverse point generators.
//!
//! Cell membership is computed as `floor(x · b^d)` in exact integer
//! arithmetic on the binary expansion of `x`, so no point is ever assigned to
//! two cells of one shape.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::design::DesignMatrix;
use crate::error::{Error, Result};
use crate::matrix::RealMatrix;

/// `∏ [a_i / b^{d_i}, (a_i + 1) / b^{d_i})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElementaryInterval {
    pub base: u64,
    pub exponents: Vec<u32>,
    pub anchors: Vec<u64>,
}

impl ElementaryInterval {
    pub fn volume(&self) -> f64 {
        let total: u32 = self.exponents.iter().sum();
        (self.base as f64).powi(-(total as i32))
    }

    pub fn contains(&self, point: &[f64]) -> bool {
        point
            .iter()
            .zip(self.exponents.iter().zip(&self.anchors))
            .all(|(&x, (&d, &a))| digit_floor(x, self.base, d) == a)
    }
}

/// `floor(x · b^d)` for `x ∈ [0, 1)`, exact.
pub fn digit_floor(x: f64, base: u64, d: u32) -> u64 {
    debug_assert!((0.0..1.0).contains(&x));
    if x == 0.0 {
        return 0;
    }
    // x = mantissa · 2^(-shift) with an integer mantissa.
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let (mantissa, shift) = if exp == 0 {
        (bits & ((1 << 52) - 1), 1074_i64)
    } else {
        ((bits & ((1 << 52) - 1)) | (1 << 52), 1075 - exp)
    };
    let scale = (base as u128).checked_pow(d);
    match scale.and_then(|s| s.checked_mul(mantissa as u128)) {
        Some(product) if shift < 128 => (product >> shift) as u64,
        Some(_) => 0,
        None => {
            let product = BigUint::from(base).pow(d) * BigUint::from(mantissa);
            (product >> shift as usize).to_u64().unwrap_or(u64::MAX)
        }
    }
}

/// All compositions of `total` into `parts` non-negative parts, in colex
/// order (the last part varies slowest).
pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn rec(remaining: u32, slots: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for v in 0..=remaining {
            prefix.push(v);
            rec(remaining - v, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(total, parts, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetWitness {
    pub interval: ElementaryInterval,
    pub count: usize,
    pub expected: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetReport {
    pub holds: bool,
    pub witness: Option<NetWitness>,
}

fn check_unit_cube(points: &RealMatrix) -> Result<()> {
    for i in 0..points.rows() {
        for j in 0..points.cols() {
            let v = points.get(i, j);
            if !(0.0..1.0).contains(&v) {
                return Err(Error::OutOfUnitCube {
                    row: i,
                    col: j,
                    value: v,
                });
            }
        }
    }
    Ok(())
}

/// Whether the `b^m` points form a `(t, m, s)`-net in base `b`: every
/// elementary interval of volume `b^{t-m}` holds exactly `b^t` points. The
/// first violation in colex-composition, row-major-anchor order is returned.
pub fn is_net(points: &RealMatrix, base: u64, t: u32, m: u32) -> Result<NetReport> {
    if base < 2 {
        return Err(Error::InvalidParameter(format!("base {base}")));
    }
    if t > m {
        return Err(Error::InvalidParameter(format!("t = {t} exceeds m = {m}")));
    }
    let n = (base as u128)
        .checked_pow(m)
        .filter(|&n| n <= usize::MAX as u128)
        .ok_or_else(|| Error::InvalidParameter(format!("{base}^{m} points")))? as usize;
    if points.rows() != n {
        return Err(Error::InvalidDimension(format!(
            "a net with base {base} and m = {m} has {n} points, got {}",
            points.rows()
        )));
    }
    check_unit_cube(points)?;
    let s = points.cols();
    let expected = (base as usize).pow(t);
    let cells = n / expected;
    for shape in compositions(m - t, s) {
        let mut counts = vec![0_usize; cells];
        for i in 0..n {
            let mut index = 0_usize;
            for (j, &d) in shape.iter().enumerate() {
                index = index * (base as usize).pow(d)
                    + digit_floor(points.get(i, j), base, d) as usize;
            }
            counts[index] += 1;
        }
        if let Some(bad) = counts.iter().position(|&c| c != expected) {
            let mut anchors = vec![0_u64; s];
            let mut rest = bad;
            for j in (0..s).rev() {
                let width = (base as usize).pow(shape[j]);
                anchors[j] = (rest % width) as u64;
                rest /= width;
            }
            return Ok(NetReport {
                holds: false,
                witness: Some(NetWitness {
                    interval: ElementaryInterval {
                        base,
                        exponents: shape,
                        anchors,
                    },
                    count: counts[bad],
                    expected,
                }),
            });
        }
    }
    Ok(NetReport {
        holds: true,
        witness: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SliceVerdict {
    /// Slice index: points `k·b^m .. (k+1)·b^m`.
    pub k: usize,
    pub m: u32,
    pub report: NetReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SequenceReport {
    pub holds: bool,
    pub slices: Vec<SliceVerdict>,
}

/// Checks every aligned slice of `b^m` consecutive points, `t < m ≤ m_max`,
/// for the `(t, m, s)`-net property.
pub fn is_sequence_prefix(
    points: &RealMatrix,
    base: u64,
    t: u32,
    m_max: u32,
) -> Result<SequenceReport> {
    if base < 2 {
        return Err(Error::InvalidParameter(format!("base {base}")));
    }
    let total = points.rows();
    let mut slices = Vec::new();
    for m in t + 1..=m_max {
        let Some(size) = (base as usize).checked_pow(m) else {
            break;
        };
        if size > total {
            break;
        }
        for k in 0..total / size {
            let rows: Vec<Vec<f64>> = (k * size..(k + 1) * size)
                .map(|i| points.row(i).to_vec())
                .collect();
            let report = is_net(&RealMatrix::from_rows(&rows)?, base, t, m)?;
            slices.push(SliceVerdict { k, m, report });
        }
    }
    Ok(SequenceReport {
        holds: slices.iter().all(|v| v.report.holds),
        slices,
    })
}

/// Base-`b` radical inverse of `index`: its digits reflected about the radix point.
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let (mut numerator, mut denominator) = (0_u128, 1_u128);
    while index > 0 {
        numerator = numerator * base as u128 + (index % base) as u128;
        denominator *= base as u128;
        index /= base;
    }
    numerator as f64 / denominator as f64
}

/// Points `i = 0..n` with coordinate `j` the radical inverse of `i` in
/// `bases[j]` (a Halton set when the bases are pairwise coprime).
pub fn radical_inverse_points(n: usize, bases: &[u64]) -> Result<DesignMatrix> {
    if n == 0 || bases.is_empty() {
        return Err(Error::InvalidDimension(format!(
            "{n} points in {} dimensions",
            bases.len()
        )));
    }
    if let Some(b) = bases.iter().find(|&&b| b < 2) {
        return Err(Error::InvalidParameter(format!("base {b}")));
    }
    DesignMatrix::new(RealMatrix::from_fn(n, bases.len(), |i, j| {
        radical_inverse(i as u64, bases[j])
    }))
}

/// Hammersley set: first coordinate `i/n`, the rest radical inverses.
pub fn hammersley(n: usize, bases: &[u64]) -> Result<DesignMatrix> {
    let tail = radical_inverse_points(n, bases)?;
    DesignMatrix::new(RealMatrix::from_fn(n, bases.len() + 1, |i, j| {
        if j == 0 {
            i as f64 / n as f64
        } else {
            tail.get(i, j - 1)
        }
    }))
}

/// The first `n` points of a two-dimensional `(0, 2)`-sequence in base 2:
/// the van der Corput sequence paired with the digits of `i` multiplied by
/// the binary Pascal matrix.
pub fn pascal_sequence_2d(n: usize) -> Result<DesignMatrix> {
    if n == 0 {
        return Err(Error::InvalidDimension("0 points".into()));
    }
    let second = |i: u64| -> f64 {
        // Output digit r (weight 2^-(r+1)) is Σ_c C(c, r) · bit_c mod 2.
        let mut value = 0_u64;
        let bits = 64 - i.leading_zeros();
        for r in 0..bits {
            let mut digit = 0_u64;
            for c in r..bits {
                // C(c, r) is odd iff r is a submask of c.
                if (i >> c) & 1 == 1 && (c & r) == r {
                    digit ^= 1;
                }
            }
            value |= digit << (63 - r);
        }
        value as f64 / 2f64.powi(64)
    };
    DesignMatrix::new(RealMatrix::from_fn(n, 2, |i, j| {
        if j == 0 {
            radical_inverse(i as u64, 2)
        } else {
            second(i as u64)
        }
    }))
}
