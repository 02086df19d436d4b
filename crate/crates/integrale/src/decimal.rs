//! Decimal approximations of exact rationals.

use integrale_core::{BigInt, Rational};
use num_traits::{One, Signed, Zero};

/// Default number of significant digits.
pub const SIGNIFICANT_DIGITS: usize = 20;

fn pow10(e: usize) -> BigInt {
    num_traits::pow(BigInt::from(10), e)
}

/// `x` rounded half-to-even to `digits` significant digits, in the form
/// `d.ddd...e<exponent>`. Zero is rendered as `0`.
pub fn to_scientific(x: &Rational, digits: usize) -> String {
    assert!(digits >= 1, "need at least one digit");
    if x.is_zero() {
        return "0".to_string();
    }
    let num = x.numer().abs();
    let den = x.denom().clone();

    // 10^e <= num/den < 10^(e+1)
    let mut e = num.to_string().len() as i64 - den.to_string().len() as i64;
    let at_least = |e: i64| {
        if e >= 0 {
            num >= &den * pow10(e as usize)
        } else {
            &num * pow10((-e) as usize) >= den
        }
    };
    if !at_least(e) {
        e -= 1;
    }

    // q + r/den' = num/den * 10^(digits - 1 - e)
    let shift = digits as i64 - 1 - e;
    let (n, d) = if shift >= 0 {
        (&num * pow10(shift as usize), den)
    } else {
        (num, den * pow10((-shift) as usize))
    };
    let mut q = &n / &d;
    let twice_rem = (&n - &q * &d) * 2;
    if twice_rem > d || (twice_rem == d && (&q % 2u32).is_one()) {
        q += 1;
    }
    if q == pow10(digits) {
        q /= 10;
        e += 1;
    }

    let mantissa = q.to_string();
    let sign = if x.is_negative() { "-" } else { "" };
    let (head, tail) = mantissa.split_at(1);
    if tail.is_empty() {
        format!("{sign}{head}e{e}")
    } else {
        format!("{sign}{head}.{tail}e{e}")
    }
}

/// `x` as a percentage with `decimals` digits after the point, rounded
/// half-to-even.
pub fn to_percent(x: &Rational, decimals: usize) -> String {
    let scaled = x * Rational::from_integer(BigInt::from(100) * pow10(decimals));
    let mut q = scaled.floor().to_integer();
    let frac = scaled - Rational::from_integer(q.clone());
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    if frac > half || (frac == half && (&q % 2u32) != BigInt::zero()) {
        q += 1;
    }
    let sign = if q.is_negative() { "-" } else { "" };
    let digits = format!("{:0>width$}", q.abs().to_string(), width = decimals + 1);
    let (int, dec) = digits.split_at(digits.len() - decimals);
    if decimals == 0 {
        format!("{sign}{int}%")
    } else {
        format!("{sign}{int}.{dec}%")
    }
}
