//! Truncated power series in one formal variable `ε` and residue extraction.
//!
//! Residues of `num(ε) / (ε^m * prod (ε + b_i)^{m_i})` at `ε = 0` are read
//! off as the coefficient of `ε^{m-1}` in `num(ε) * prod (ε + b_i)^{-m_i}`.
//! Each negative power is expanded as an integer polynomial over a single
//! power of `b_i`, so the products run over integers and the rational scale
//! is applied once at the end.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{AddAssign, Mul};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::ComputeError;
use crate::linalg::{binomial, int_pow, integer_row, lcm_of_denominators};
use crate::Rational;

/// Dense coefficients of `ε^0 ..= ε^k`; the truncation degree is `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries<T = Rational> {
    coeffs: Vec<T>,
}

impl<T: Clone + Zero> TruncatedSeries<T> {
    /// Builds a series of truncation degree `degree`; missing coefficients
    /// are zero and coefficients past `degree` are dropped.
    pub fn new(mut coeffs: Vec<T>, degree: usize) -> Self {
        coeffs.resize(degree + 1, T::zero());
        Self { coeffs }
    }

    pub fn one(degree: usize) -> Self
    where
        T: One,
    {
        let mut coeffs = vec![T::zero(); degree + 1];
        coeffs[0] = T::one();
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn truncate(&self, degree: usize) -> Self {
        Self::new(self.coeffs.clone(), degree)
    }
}

/// Product of `p` and `q` keeping the terms of degree `<= k`.
pub fn truncated_multiply<T>(p: &TruncatedSeries<T>, q: &TruncatedSeries<T>, k: usize) -> TruncatedSeries<T>
where
    T: Clone + Zero + AddAssign,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    let mut out = vec![T::zero(); k + 1];
    for (i, a) in p.coeffs.iter().enumerate().take(k + 1) {
        if a.is_zero() {
            continue;
        }
        for (j, b) in q.coeffs.iter().enumerate().take(k + 1 - i) {
            out[i + j] += a * b;
        }
    }
    TruncatedSeries { coeffs: out }
}

/// `(constant + slope * ε)^n` truncated to degree `k`.
pub fn expand_linear_power(constant: &Rational, slope: &Rational, n: u32, k: usize) -> TruncatedSeries {
    let top = k.min(n as usize);
    let coeffs = (0..=top)
        .map(|j| {
            let c = Rational::from_integer(binomial(u64::from(n), j as u64));
            c * num_traits::pow(constant.clone(), n as usize - j) * num_traits::pow(slope.clone(), j)
        })
        .collect();
    TruncatedSeries::new(coeffs, k)
}

/// `(ε + b)^n` truncated to degree `k`: coefficient `j` is `C(n, j) b^(n-j)`.
pub fn expand_positive_binomial(b: &Rational, n: u32, k: usize) -> TruncatedSeries {
    expand_linear_power(b, &Rational::one(), n, k)
}

/// `(ε + b)^{-m}` truncated to degree `k`, stored as
/// `integer_poly(ε) / scale_base^scale_exp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredNegativeBinomial {
    pub integer_poly: TruncatedSeries<BigInt>,
    pub scale_base: BigInt,
    pub scale_exp: u32,
}

impl FactoredNegativeBinomial {
    pub fn to_series(&self) -> TruncatedSeries {
        let scale = Rational::from_integer(int_pow(&self.scale_base, u64::from(self.scale_exp)));
        let coeffs = self
            .integer_poly
            .coeffs()
            .iter()
            .map(|c| Rational::from_integer(c.clone()) / &scale)
            .collect();
        TruncatedSeries::new(coeffs, self.integer_poly.degree())
    }
}

/// Coefficient `j` of the integer polynomial is
/// `(-1)^j C(m+j-1, m-1) b^(k-j)`, over the common denominator `b^(m+k)`.
pub fn expand_negative_binomial(b: &BigInt, m: u32, k: usize) -> Result<FactoredNegativeBinomial, ComputeError> {
    expand_negative_linear(b, &BigInt::one(), m, k)
}

/// `(b + slope * ε)^{-m}` truncated to degree `k`: coefficient `j` of the
/// integer polynomial is `(-1)^j C(m+j-1, m-1) slope^j b^(k-j)`, over
/// `b^(m+k)`.
pub fn expand_negative_linear(
    b: &BigInt,
    slope: &BigInt,
    m: u32,
    k: usize,
) -> Result<FactoredNegativeBinomial, ComputeError> {
    if b.is_zero() {
        return Err(ComputeError::DivisionByZero);
    }
    let m64 = u64::from(m);
    let mut b_powers = Vec::with_capacity(k + 1);
    let mut acc = BigInt::one();
    for _ in 0..=k {
        b_powers.push(acc.clone());
        acc *= b;
    }
    let mut coeffs = Vec::with_capacity(k + 1);
    let mut slope_power = BigInt::one();
    for j in 0..=k {
        let mut c = binomial(m64 + j as u64 - 1, m64 - 1) * &b_powers[k - j] * &slope_power;
        if j % 2 == 1 {
            c = -c;
        }
        coeffs.push(c);
        slope_power *= slope;
    }
    Ok(FactoredNegativeBinomial {
        integer_poly: TruncatedSeries::new(coeffs, k),
        scale_base: b.clone(),
        scale_exp: m + k as u32,
    })
}

/// Coefficient of `ε^(pole_order - 1)` in
/// `numerator(ε) * prod (ε + b)^{-m}` over `denominator_factors = [(b, m)]`,
/// i.e. the residue at zero of `numerator / (ε^pole_order * prod (ε + b)^m)`.
///
/// # Panics
/// If `pole_order` is zero or the numerator is truncated below
/// `pole_order - 1`.
pub fn residue_rational(
    numerator: &TruncatedSeries,
    denominator_factors: &[(BigInt, u32)],
    pole_order: u32,
) -> Result<Rational, ComputeError> {
    assert!(pole_order >= 1, "pole order must be positive");
    let k = pole_order as usize - 1;
    assert!(numerator.degree() >= k, "numerator truncated below the residue degree");

    let head = &numerator.coeffs()[..=k];
    let denom = lcm_of_denominators(head);
    let (num, den) = residue_integer(&TruncatedSeries::new(integer_row(head), k), denominator_factors, pole_order)?;
    Ok(Rational::new(num, den * denom))
}

/// [`residue_rational`] for an integer numerator, returned as an unreduced
/// fraction `(numerator, denominator)`.
pub fn residue_integer(
    numerator: &TruncatedSeries<BigInt>,
    denominator_factors: &[(BigInt, u32)],
    pole_order: u32,
) -> Result<(BigInt, BigInt), ComputeError> {
    assert!(pole_order >= 1, "pole order must be positive");
    let k = pole_order as usize - 1;
    assert!(numerator.degree() >= k, "numerator truncated below the residue degree");

    let mut poly = numerator.truncate(k);
    let mut scale_den = BigInt::one();
    for (b, m) in denominator_factors {
        let factor = expand_negative_binomial(b, *m, k)?;
        poly = truncated_multiply(&poly, &factor.integer_poly, k);
        scale_den *= int_pow(&factor.scale_base, u64::from(factor.scale_exp));
    }
    Ok((poly.coeff(k), scale_den))
}

/// Taylor coefficient `c_target` of `num / den` from the recurrence
/// `c_0 = a_0 / b_0`, `c_k = (a_k - b_1 c_{k-1} - ... - b_k c_0) / b_0`.
pub fn laurent_coefficient_via_recurrence(
    num_coeffs: &[Rational],
    den_coeffs: &[Rational],
    target: usize,
) -> Result<Rational, ComputeError> {
    let b0 = match den_coeffs.first() {
        Some(b) if !b.is_zero() => b,
        _ => return Err(ComputeError::DivisionByZero),
    };
    let zero = Rational::zero();
    let mut c: Vec<Rational> = Vec::with_capacity(target + 1);
    for k in 0..=target {
        let mut acc = num_coeffs.get(k).unwrap_or(&zero).clone();
        for j in 1..=k.min(den_coeffs.len() - 1) {
            acc -= &den_coeffs[j] * &c[k - j];
        }
        c.push(acc / b0);
    }
    Ok(c.pop().expect("target + 1 coefficients"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn qs(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| q(x, 1)).collect()
    }

    fn series(v: &[i64], k: usize) -> TruncatedSeries {
        TruncatedSeries::new(qs(v), k)
    }

    #[test]
    fn truncated_products() {
        let p = series(&[1, 1], 1);
        assert_eq!(truncated_multiply(&p, &p, 1), series(&[1, 2], 1));
        let a = series(&[1, -1, 1], 2);
        let b = series(&[1, 1], 2);
        assert_eq!(truncated_multiply(&a, &b, 2), series(&[1, 0, 0], 2));
    }

    #[test]
    fn positive_binomials() {
        assert_eq!(expand_positive_binomial(&q(1, 1), 3, 1), series(&[1, 3], 1));
        assert_eq!(expand_positive_binomial(&q(0, 1), 5, 3), series(&[0, 0, 0, 0], 3));
        assert_eq!(expand_positive_binomial(&q(2, 1), 2, 2), series(&[4, 4, 1], 2));
    }

    #[test]
    fn negative_binomials() {
        let f = expand_negative_binomial(&BigInt::from(2), 1, 2).unwrap();
        assert_eq!(f.integer_poly.coeffs(), &[4.into(), (-2).into(), 1.into()]);
        assert_eq!((f.scale_base.clone(), f.scale_exp), (BigInt::from(2), 3));
        assert_eq!(f.to_series(), TruncatedSeries::new(vec![q(1, 2), q(-1, 4), q(1, 8)], 2));

        let g = expand_negative_binomial(&BigInt::from(-1), 1, 0).unwrap();
        assert_eq!(g.to_series(), series(&[-1], 0));

        let h = expand_negative_binomial(&BigInt::from(1), 2, 1).unwrap();
        assert_eq!(h.to_series(), series(&[1, -2], 1));

        assert_eq!(
            expand_negative_binomial(&BigInt::zero(), 1, 3),
            Err(ComputeError::DivisionByZero)
        );
    }

    #[test]
    fn worked_residues() {
        // (ε+1)^3 / (ε^2 (ε-1))
        let num = expand_positive_binomial(&q(1, 1), 3, 1);
        assert_eq!(residue_rational(&num, &[(BigInt::from(-1), 1)], 2).unwrap(), q(-4, 1));
        // (1+ε)^3 / (ε (-ε) (1+ε)): the sign of -ε moves to the numerator
        let neg = series(&[-1, -3, -3, -1], 1);
        assert_eq!(residue_rational(&neg, &[(BigInt::from(1), 1)], 2).unwrap(), q(-2, 1));
        // (1+2ε)^3 / (ε ε (1+ε))
        let num = expand_linear_power(&q(1, 1), &q(2, 1), 3, 1);
        assert_eq!(residue_rational(&num, &[(BigInt::from(1), 1)], 2).unwrap(), q(5, 1));
        assert_eq!(
            residue_rational(&num, &[(BigInt::zero(), 1)], 2),
            Err(ComputeError::DivisionByZero)
        );
    }

    #[test]
    fn recurrence_examples() {
        let r = laurent_coefficient_via_recurrence(&qs(&[1, 3, 3, 1]), &qs(&[-1, 1]), 1).unwrap();
        assert_eq!(r, q(-4, 1));
        assert_eq!(laurent_coefficient_via_recurrence(&qs(&[1]), &qs(&[1]), 0).unwrap(), q(1, 1));
        assert_eq!(
            laurent_coefficient_via_recurrence(&qs(&[1]), &qs(&[0, 1]), 0),
            Err(ComputeError::DivisionByZero)
        );
    }

    fn full_product(a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    proptest! {
        #[test]
        fn truncation_commutes_with_full_product(
            a in proptest::collection::vec(-9i64..=9, 1..=9),
            b in proptest::collection::vec(-9i64..=9, 1..=9),
            k in 0usize..=10,
        ) {
            let full = full_product(&a, &b);
            let got = truncated_multiply(&series(&a, k), &series(&b, k), k);
            prop_assert_eq!(got, series(&full, k));
        }

        #[test]
        fn multiplication_is_commutative_and_associative(
            a in proptest::collection::vec(-9i64..=9, 1..=6),
            b in proptest::collection::vec(-9i64..=9, 1..=6),
            c in proptest::collection::vec(-9i64..=9, 1..=6),
            k in 0usize..=6,
        ) {
            let (a, b, c) = (series(&a, k), series(&b, k), series(&c, k));
            prop_assert_eq!(truncated_multiply(&a, &b, k), truncated_multiply(&b, &a, k));
            let left = truncated_multiply(&truncated_multiply(&a, &b, k), &c, k);
            let right = truncated_multiply(&a, &truncated_multiply(&b, &c, k), k);
            prop_assert_eq!(left, right);
        }

        #[test]
        fn negative_binomial_inverts_positive(b in -12i64..=12, m in 1u32..=5, k in 0usize..=6) {
            prop_assume!(b != 0);
            let inv = expand_negative_binomial(&BigInt::from(b), m, k).unwrap().to_series();
            let pos = expand_positive_binomial(&q(b, 1), m, k);
            prop_assert_eq!(truncated_multiply(&inv, &pos, k), TruncatedSeries::one(k));
        }

        #[test]
        fn residue_agrees_with_recurrence(
            num in proptest::collection::vec(-9i64..=9, 1..=7),
            factors in proptest::collection::vec((-4i64..=4, 1u32..=2), 0..=3),
            pole in 1u32..=4,
            extra in 0usize..=3,
        ) {
            prop_assume!(factors.iter().all(|&(b, _)| b != 0));
            let k = pole as usize - 1;
            let numerator = series(&num, k + extra);
            let big: Vec<(BigInt, u32)> = factors.iter().map(|&(b, m)| (BigInt::from(b), m)).collect();
            let via_series = residue_rational(&numerator, &big, pole).unwrap();

            let mut den = vec![q(1, 1)];
            for &(b, m) in &factors {
                for _ in 0..m {
                    den = poly_mul(&den, &[q(b, 1), q(1, 1)]);
                }
            }
            let via_recurrence = laurent_coefficient_via_recurrence(&qs(&num), &den, k).unwrap();
            prop_assert_eq!(via_series, via_recurrence);
        }
    }
}
