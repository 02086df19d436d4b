//! Polynomials as monomial sums and as sums of powers of linear forms.
//!
//! Every monomial `x^M` is rewritten with the identity
//!
//! ```text
//! x^M = 1/|M|! * sum_{0 <= p <= M} (-1)^{|M| - |p|} * prod_i C(M_i, p_i) * <p, x>^{|M|}
//! ```
//!
//! which turns an arbitrary polynomial into a [`LinearFormSum`]. The `p = 0`
//! summand has the zero form raised to a positive power and is never
//! generated.

mod text;

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::ComputeError;
use crate::linalg::{binomial, factorial};
use crate::Rational;

pub use text::{parse_linear_form_list, parse_monomial_list};

/// Default limit on the number of monomials produced by
/// [`expand_linear_form_sum`].
pub const DEFAULT_EXPANSION_BUDGET: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(exps: Vec<u32>) -> Self {
        Self(exps)
    }

    pub fn zero(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl From<Vec<u32>> for ExponentVector {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

/// A polynomial stored as a map from exponent vectors to nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialSum {
    dim: usize,
    terms: BTreeMap<ExponentVector, Rational>,
}

impl MonomialSum {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `coefficient * x^exponents`, merging with an existing term.
    ///
    /// # Panics
    /// If the exponent vector does not have length `dim`.
    pub fn add_term(&mut self, coefficient: Rational, exponents: ExponentVector) {
        assert_eq!(exponents.dim(), self.dim, "exponent vector length");
        add_merged(&mut self.terms, exponents, coefficient);
    }

    pub fn coefficient(&self, exponents: &ExponentVector) -> Rational {
        self.terms.get(exponents).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ExponentVector, &Rational)> {
        self.terms.iter()
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(ExponentVector::degree).max().unwrap_or(0)
    }
}

/// `coefficient * <form, x>^power`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearFormPower {
    pub coefficient: Rational,
    pub power: u32,
    pub form: Vec<Rational>,
}

/// Map key ordering linear forms by descending power, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
struct FormKey {
    power: u32,
    form: Vec<Rational>,
}

impl Ord for FormKey {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .power
            .cmp(&self.power)
            .then_with(|| self.form.cmp(&other.form))
    }
}

impl PartialOrd for FormKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Borrowed view of one term of a [`LinearFormSum`].
#[derive(Clone, Copy, Debug)]
pub struct Term<'a> {
    pub coefficient: &'a Rational,
    pub power: u32,
    pub form: &'a [Rational],
}

impl Term<'_> {
    pub fn to_owned(&self) -> LinearFormPower {
        LinearFormPower {
            coefficient: self.coefficient.clone(),
            power: self.power,
            form: self.form.to_vec(),
        }
    }
}

/// A sum of powers of linear forms. Terms with equal `(power, form)` are
/// merged; a term whose coefficient cancels to zero disappears.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearFormSum {
    dim: usize,
    terms: BTreeMap<FormKey, Rational>,
}

impl LinearFormSum {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// # Panics
    /// If `form` does not have length `dim`.
    pub fn add_term(&mut self, coefficient: Rational, power: u32, form: Vec<Rational>) {
        assert_eq!(form.len(), self.dim, "linear form length");
        add_merged(&mut self.terms, FormKey { power, form }, coefficient);
    }

    pub fn push(&mut self, term: LinearFormPower) {
        self.add_term(term.coefficient, term.power, term.form);
    }

    /// Adds every term of `other` scaled by `factor`.
    pub fn add_scaled(&mut self, other: &LinearFormSum, factor: &Rational) {
        for t in other.iter() {
            self.add_term(t.coefficient * factor, t.power, t.form.to_vec());
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Term<'_>> {
        self.terms.iter().map(|(k, c)| Term {
            coefficient: c,
            power: k.power,
            form: &k.form,
        })
    }

    pub fn to_vec(&self) -> Vec<LinearFormPower> {
        self.iter().map(|t| t.to_owned()).collect()
    }

    pub fn max_power(&self) -> u32 {
        self.terms.keys().map(|k| k.power).max().unwrap_or(0)
    }
}

fn add_merged<K: Ord>(map: &mut BTreeMap<K, Rational>, key: K, coefficient: Rational) {
    if coefficient.is_zero() {
        return;
    }
    match map.entry(key) {
        alloc::collections::btree_map::Entry::Vacant(e) => {
            e.insert(coefficient);
        }
        alloc::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += coefficient;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// Number of powers of linear forms produced for one monomial:
/// `prod (M_i + 1) - 1`.
pub fn count_decomposition_terms(exponents: &ExponentVector) -> u128 {
    exponents
        .as_slice()
        .iter()
        .map(|&m| u128::from(m) + 1)
        .product::<u128>()
        - 1
}

/// Decomposes the monomial `x^exponents` into powers of linear forms.
///
/// The constant monomial maps to the single term `1 * <0, x>^0`.
pub fn decompose_monomial(exponents: &ExponentVector) -> LinearFormSum {
    let dim = exponents.dim();
    let mut out = LinearFormSum::new(dim);
    let degree = exponents.degree();
    if degree == 0 {
        out.add_term(Rational::one(), 0, vec![Rational::zero(); dim]);
        return out;
    }
    let m = exponents.as_slice();
    let denom = factorial(u64::from(degree));
    let mut p = vec![0u32; dim];
    loop {
        // odometer step; skips p = 0 because we advance before emitting
        let mut i = 0;
        while i < dim && p[i] == m[i] {
            p[i] = 0;
            i += 1;
        }
        if i == dim {
            break;
        }
        p[i] += 1;

        let mut c = p
            .iter()
            .zip(m)
            .fold(BigInt::one(), |acc, (&pi, &mi)| acc * binomial(u64::from(mi), u64::from(pi)));
        if (degree - p.iter().sum::<u32>()) % 2 == 1 {
            c = -c;
        }
        let form = p.iter().map(|&pi| Rational::from_integer(pi.into())).collect();
        out.add_term(Rational::new(c, denom.clone()), degree, form);
    }
    out
}

/// Decomposes every monomial and merges the results.
pub fn decompose_polynomial(poly: &MonomialSum) -> LinearFormSum {
    let mut out = LinearFormSum::new(poly.dim());
    for (exps, coef) in poly.iter() {
        out.add_scaled(&decompose_monomial(exps), coef);
    }
    out
}

/// Multinomial expansion of a sum of powers of linear forms back into
/// monomials. Fails if more than `budget` monomials would be generated.
pub fn expand_linear_form_sum(f: &LinearFormSum, budget: usize) -> Result<MonomialSum, ComputeError> {
    let dim = f.dim();
    let mut total: u128 = 0;
    for t in f.iter() {
        let nonzero = t.form.iter().filter(|c| !c.is_zero()).count() as u64;
        let count = if t.power == 0 {
            1
        } else if nonzero == 0 {
            0
        } else {
            // compositions of `power` into `nonzero` parts
            let c = binomial(u64::from(t.power) + nonzero - 1, nonzero - 1);
            u128::try_from(c).unwrap_or(u128::MAX)
        };
        total = total.saturating_add(count);
        if total > budget as u128 {
            return Err(ComputeError::BudgetExceeded { budget });
        }
    }

    let mut out = MonomialSum::new(dim);
    for t in f.iter() {
        if t.power == 0 {
            out.add_term(t.coefficient.clone(), ExponentVector::zero(dim));
            continue;
        }
        let support: Vec<usize> = (0..dim).filter(|&i| !t.form[i].is_zero()).collect();
        if support.is_empty() {
            continue;
        }
        let m = t.power;
        let m_fact = Rational::from_integer(factorial(u64::from(m)));
        let mut parts = vec![0u32; support.len()];
        for_each_composition(m, &mut parts, 0, &mut |parts| {
            let mut coef = t.coefficient * &m_fact;
            let mut exps = vec![0u32; dim];
            for (&k, &i) in parts.iter().zip(&support) {
                exps[i] = k;
                coef *= num_traits::pow(t.form[i].clone(), k as usize);
                coef /= Rational::from_integer(factorial(u64::from(k)));
            }
            out.add_term(coef, ExponentVector::new(exps));
        });
    }
    Ok(out)
}

fn for_each_composition(rest: u32, parts: &mut [u32], at: usize, f: &mut impl FnMut(&[u32])) {
    if at + 1 == parts.len() {
        parts[at] = rest;
        f(parts);
        return;
    }
    for k in 0..=rest {
        parts[at] = k;
        for_each_composition(rest - k, parts, at + 1, f);
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, r: &Rational) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

/// Canonical bracket form, e.g. `[[3,[2,4,6]],[7,[0,3,5]]]`.
impl fmt::Display for MonomialSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("[")?;
            write_rational(f, c)?;
            f.write_str(",[")?;
            for (j, x) in e.0.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("]]")?;
        }
        f.write_str("]")
    }
}

/// Canonical bracket form, e.g. `[[3,[10,[2,4,6]]],[7,[12,[0,3,5]]]]`.
impl fmt::Display for LinearFormSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, t) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("[")?;
            write_rational(f, t.coefficient)?;
            write!(f, ",[{},[", t.power)?;
            for (j, x) in t.form.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write_rational(f, x)?;
            }
            f.write_str("]]]")?;
        }
        f.write_str("]")
    }
}
