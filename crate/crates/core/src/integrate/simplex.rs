//! Integrals of powers of linear forms over simplices.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::ComputeError;
use crate::linalg::{binomial, dot, factorial, int_pow, scaled_integer_row};
use crate::polyhedra::Simplex;
use crate::series::{residue_integer, TruncatedSeries};
use crate::Rational;

use super::FractionSum;

/// `M! / ((M+d)! L^M)`, the factor shared by all simplices when the form is
/// `l' / L` with `l'` integral.
fn shared_factor(m: u32, d: usize, l_scale: &BigInt) -> Rational {
    let m = u64::from(m);
    Rational::new(factorial(m), factorial(m + d as u64) * int_pow(l_scale, m))
}

/// `w_i = S <l, s_i>` for integral `l`, where `S` is the common denominator
/// of the vertices.
fn vertex_values(l: &[BigInt], s: &Simplex) -> Vec<BigInt> {
    s.integer_vertices().0.iter().map(|v| dot(l, v)).collect()
}

/// Multiplies an unreduced fraction by `d! vol(Δ) / S^M`.
fn finish(num: BigInt, den: BigInt, m: u32, s: &Simplex) -> (BigInt, BigInt) {
    let det = s.det_abs();
    let s_scale = s.integer_vertices().1;
    let mut den = den * det.denom();
    if !s_scale.is_one() {
        den *= int_pow(s_scale, u64::from(m));
    }
    (num * det.numer(), den)
}

/// Regular sum over the vertex values without the shared factor, or `None`
/// if two values coincide.
fn regular_parts(values: &[BigInt], m: u32, s: &Simplex) -> Option<(BigInt, BigInt)> {
    let mut dens = Vec::with_capacity(values.len());
    for (i, vi) in values.iter().enumerate() {
        let mut den = BigInt::one();
        for (j, vj) in values.iter().enumerate() {
            if i != j {
                let diff = vi - vj;
                if diff.is_zero() {
                    return None;
                }
                den *= diff;
            }
        }
        dens.push(den);
    }
    let common = dens.iter().fold(BigInt::one(), |acc, d| acc.lcm(d));
    let n = u64::from(m) + s.dim() as u64;
    let sum: BigInt = values
        .iter()
        .zip(&dens)
        .map(|(v, d)| int_pow(v, n) * (&common / d))
        .sum();
    Some(finish(sum, common, m, s))
}

/// `(ε + v)^n` truncated at degree `k`.
fn shifted_power(v: &BigInt, n: u64, k: usize) -> TruncatedSeries<BigInt> {
    let top = k.min(n as usize);
    let mut coeffs = vec![BigInt::zero(); top + 1];
    let mut power = int_pow(v, n - top as u64);
    for j in (0..=top).rev() {
        coeffs[j] = binomial(n, j as u64) * &power;
        power *= v;
    }
    TruncatedSeries::new(coeffs, k)
}

/// Residue sum over the vertex values without the shared factor.
fn residue_parts(values: Vec<BigInt>, m: u32, s: &Simplex) -> Result<(BigInt, BigInt), ComputeError> {
    let mut poles: Vec<(BigInt, u32)> = Vec::new();
    for v in values {
        match poles.iter_mut().find(|(p, _)| *p == v) {
            Some((_, mult)) => *mult += 1,
            None => poles.push((v, 1)),
        }
    }

    let n = u64::from(m) + s.dim() as u64;
    let (mut sum, mut sum_den) = (BigInt::zero(), BigInt::one());
    for (k, (vk, mk)) in poles.iter().enumerate() {
        let numerator = shifted_power(vk, n, *mk as usize - 1);
        let factors: Vec<(BigInt, u32)> = poles
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != k)
            .map(|(_, (vi, mi))| (vk - vi, *mi))
            .collect();
        let (num, den) = residue_integer(&numerator, &factors, *mk)?;
        if den == sum_den {
            sum += num;
        } else {
            sum = sum * &den + num * &sum_den;
            sum_den *= den;
        }
    }
    Ok(finish(sum, sum_den, m, s))
}

/// `∫_Δ <l, x>^M dx` when the values `<l, s_i>` at the vertices are pairwise
/// distinct:
///
/// `d! vol(Δ) M!/(M+d)! Σ_i <l, s_i>^(M+d) / Π_{j≠i} <l, s_i - s_j>`.
pub fn integrate_simplex_regular(l: &[Rational], m: u32, s: &Simplex) -> Result<Rational, ComputeError> {
    let (l, l_scale) = scaled_integer_row(l);
    let (num, den) = regular_parts(&vertex_values(&l, s), m, s).ok_or(ComputeError::RegularityViolation)?;
    Ok(Rational::new(num, den) * shared_factor(m, s.dim(), &l_scale))
}

/// `∫_Δ <l, x>^M dx` for any `l`, summing one residue per distinct vertex
/// value `v_k` with multiplicity `m_k`:
///
/// `Res_{ε=0} (ε + v_k)^(M+d) / (ε^(m_k) Π_{i≠k} (ε + v_k - v_i)^(m_i))`.
///
/// The form and the vertices are scaled to integers first, so every pole
/// constant is an integer.
pub fn integrate_simplex_residue(l: &[Rational], m: u32, s: &Simplex) -> Result<Rational, ComputeError> {
    let (l, l_scale) = scaled_integer_row(l);
    let (num, den) = residue_parts(vertex_values(&l, s), m, s)?;
    Ok(Rational::new(num, den) * shared_factor(m, s.dim(), &l_scale))
}

/// Regular formula when it applies, residues otherwise.
pub fn integrate_simplex(l: &[Rational], m: u32, s: &Simplex) -> Result<Rational, ComputeError> {
    integrate_simplices(l, m, core::slice::from_ref(s))
}

/// Sum of [`integrate_simplex`] over `simplices` of dimension `l.len()`.
pub fn integrate_simplices(l: &[Rational], m: u32, simplices: &[Simplex]) -> Result<Rational, ComputeError> {
    let (li, l_scale) = scaled_integer_row(l);
    let mut total = FractionSum::new();
    for s in simplices {
        let values = vertex_values(&li, s);
        let (num, den) = match regular_parts(&values, m, s) {
            Some(parts) => parts,
            None => residue_parts(values, m, s)?,
        };
        total.add(num, den);
    }
    Ok(total.finish() * shared_factor(m, l.len(), &l_scale))
}
