//! Exact integer and rational linear algebra used by the geometry code.
//!
//! Rows are kept as integer vectors whenever possible. Elimination is
//! fraction-free and divides out the content of every updated row, which
//! keeps the entries from growing.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Rational;

pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn rational_pow(base: &Rational, exp: u64) -> Rational {
    num_traits::pow(base.clone(), exp as usize)
}

pub fn int_pow(base: &BigInt, exp: u64) -> BigInt {
    num_traits::pow(base.clone(), exp as usize)
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| if v.denom().is_one() { acc } else { acc.lcm(v.denom()) })
}

/// Scales `row` by the (positive) lcm of its denominators.
pub fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    scaled_integer_row(row).0
}

/// `(scale * row, scale)` with `scale` the lcm of the denominators.
pub fn scaled_integer_row(row: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let scale = lcm_of_denominators(row);
    let scaled = row
        .iter()
        .map(|v| {
            if v.denom().is_one() {
                v.numer() * &scale
            } else {
                v.numer() * (&scale / v.denom())
            }
        })
        .collect();
    (scaled, scale)
}

/// Divides out the gcd of the entries. The zero vector is returned unchanged.
pub fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
    v
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_rational(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_mixed(a: &[Rational], b: &[BigInt]) -> Rational {
    a.iter()
        .zip(b)
        .map(|(x, y)| x * Rational::from_integer(y.clone()))
        .sum()
}

pub fn to_rational(v: &[BigInt]) -> Vec<Rational> {
    v.iter().cloned().map(Rational::from_integer).collect()
}

/// Determinant of a square integer matrix by fraction-free (Bareiss) elimination.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = !sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign {
        -det
    } else {
        det
    }
}

/// Determinant of a square rational matrix.
pub fn det_rational(rows: &[Vec<Rational>]) -> Rational {
    let mut scale = BigInt::one();
    let int_rows = rows
        .iter()
        .map(|r| {
            let s = lcm_of_denominators(r);
            let out = r.iter().map(|v| v.numer() * (&s / v.denom())).collect();
            scale *= s;
            out
        })
        .collect();
    Rational::new(bareiss_det(int_rows), scale)
}

/// Integer Gauss-Jordan form: returns the reduced rows (nonzero rows only) and
/// their pivot columns. Each pivot column is zero outside its pivot row.
pub fn integer_rref(mut rows: Vec<Vec<BigInt>>) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = &pivot_row[c] * &*x - &factor * y;
            }
            let reduced = primitive(core::mem::take(row));
            *row = reduced;
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank(rows: &[Vec<BigInt>]) -> usize {
    integer_rref(rows.to_vec()).1.len()
}

pub fn rank_rational(rows: &[Vec<Rational>]) -> usize {
    rank(&rows.iter().map(|r| integer_row(r)).collect::<Vec<_>>())
}

/// Integer basis of the right kernel of `rows` (each row has `ncols` entries).
pub fn kernel(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let (red, pivots) = integer_rref(rows.to_vec());
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let scale = pivots
            .iter()
            .enumerate()
            .fold(BigInt::one(), |acc, (i, &c)| acc.lcm(&red[i][c]));
        let mut v = vec![BigInt::zero(); ncols];
        v[free] = scale.clone();
        for (i, &c) in pivots.iter().enumerate() {
            // pivot * x_c + row[free] * x_free = 0
            v[c] = -(&red[i][free] * &scale) / &red[i][c];
        }
        basis.push(primitive(v));
    }
    basis
}

/// For a nonsingular square integer matrix `b`, returns the columns of
/// `b^{-1}`, each scaled by a positive factor to an integer primitive vector.
/// Column `j` satisfies `b * col_j = c_j * e_j` with `c_j > 0`.
pub fn inverse_columns(b: &[Vec<BigInt>]) -> Option<Vec<Vec<BigInt>>> {
    let n = b.len();
    let augmented = b
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            r
        })
        .collect();
    let (red, pivots) = integer_rref(augmented);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    let scale = red
        .iter()
        .enumerate()
        .fold(BigInt::one(), |acc, (i, row)| acc.lcm(&row[i]));
    let cols = (0..n)
        .map(|j| {
            let v = red
                .iter()
                .enumerate()
                .map(|(i, row)| &row[n + j] * (&scale / &row[i]))
                .collect();
            primitive(v)
        })
        .collect();
    Some(cols)
}

/// Incrementally maintained echelon basis used to pick linearly independent rows.
#[derive(Debug, Clone, Default)]
pub struct EchelonBasis {
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Inserts `row` if it is independent of the rows seen so far.
    pub fn insert(&mut self, row: &[BigInt]) -> bool {
        let mut v = row.to_vec();
        for (c, basis_row) in &self.rows {
            if v[*c].is_zero() {
                continue;
            }
            let factor = v[*c].clone();
            for (x, y) in v.iter_mut().zip(basis_row) {
                *x = &basis_row[*c] * &*x - &factor * y;
            }
            v = primitive(v);
        }
        match v.iter().position(|x| !x.is_zero()) {
            Some(c) => {
                self.rows.push((c, v));
                true
            }
            None => false,
        }
    }
}

pub fn is_integral(v: &Rational) -> bool {
    v.denom().is_one()
}

pub fn abs(v: &BigInt) -> BigInt {
    v.abs()
}
