//! Elimination of equality rows by unimodular substitution.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Halfspace, HalfspaceRep};
use crate::error::GeometryError;
use crate::linalg::{binomial, dot_rational};
use crate::polynomial::LinearFormSum;
use crate::Rational;

/// The affine map `x = matrix * y + translation` from reduced coordinates
/// `y` back to the original coordinates `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingMap {
    /// `original_dim` rows of `reduced_dim` entries.
    matrix: Vec<Vec<Rational>>,
    translation: Vec<Rational>,
}

impl EmbeddingMap {
    pub fn identity(dim: usize) -> Self {
        let matrix = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        Self {
            matrix,
            translation: alloc::vec![Rational::zero(); dim],
        }
    }

    pub fn original_dim(&self) -> usize {
        self.translation.len()
    }

    pub fn reduced_dim(&self) -> usize {
        self.matrix.first().map_or(0, Vec::len)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.original_dim())
    }

    /// Original coordinates of the reduced point `y`.
    pub fn lift(&self, y: &[Rational]) -> Vec<Rational> {
        self.matrix
            .iter()
            .zip(&self.translation)
            .map(|(row, c)| c + dot_rational(row, y))
            .collect()
    }

    /// Writes `<l, x>` as `<l', y> + kappa`.
    pub fn pull_back_form(&self, form: &[Rational]) -> (Vec<Rational>, Rational) {
        let reduced = (0..self.reduced_dim())
            .map(|j| {
                form.iter()
                    .zip(&self.matrix)
                    .map(|(l, row)| l * &row[j])
                    .sum()
            })
            .collect();
        (reduced, dot_rational(form, &self.translation))
    }

    /// Rewrites a sum of powers of linear forms in the original coordinates
    /// as one in the reduced coordinates, expanding
    /// `(<l', y> + kappa)^M = sum_j C(M, j) kappa^(M-j) <l', y>^j`.
    pub fn pull_back(&self, f: &LinearFormSum) -> LinearFormSum {
        let mut out = LinearFormSum::new(self.reduced_dim());
        for term in f.iter() {
            let (form, kappa) = self.pull_back_form(term.form);
            if kappa.is_zero() {
                out.add_term(term.coefficient.clone(), term.power, form);
                continue;
            }
            let m = term.power;
            let mut kappa_pow = Rational::one();
            // j runs downwards so that kappa^(M-j) grows one factor at a time
            for j in (0..=m).rev() {
                let c = term.coefficient * &kappa_pow * Rational::from_integer(binomial(u64::from(m), u64::from(j)));
                out.add_term(c, j, form.clone());
                kappa_pow *= &kappa;
            }
        }
        out
    }

    fn substitute(&mut self, var: usize, constant: &Rational, slopes: &[Rational]) {
        for (row, c) in self.matrix.iter_mut().zip(self.translation.iter_mut()) {
            let coef = row.remove(var);
            if coef.is_zero() {
                continue;
            }
            *c += &coef * constant;
            for (x, s) in row.iter_mut().zip(slopes) {
                *x += &coef * s;
            }
        }
    }
}

/// Solves the row `offset + <normal, z> = 0` for `z_var`, returning
/// `z_var = constant + <slopes, z without var>`.
fn solve_for(row: &Halfspace, var: usize) -> (Rational, Vec<Rational>) {
    let pivot = &row.normal[var];
    let constant = -&row.offset / pivot;
    let slopes = row
        .normal
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != var)
        .map(|(_, a)| -a / pivot)
        .collect();
    (constant, slopes)
}

fn substitute_row(row: &mut Halfspace, var: usize, constant: &Rational, slopes: &[Rational]) {
    let coef = row.normal.remove(var);
    if coef.is_zero() {
        return;
    }
    row.offset += &coef * constant;
    for (x, s) in row.normal.iter_mut().zip(slopes) {
        *x += &coef * s;
    }
}

/// Divides an equality row by the gcd of its (integer-scaled) coefficients so
/// that a unit pivot is visible.
fn normalize_equality(row: &mut Halfspace) {
    let scaled = crate::linalg::integer_row(&row.normal);
    let g = scaled.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return;
    }
    // integer_row multiplied by the lcm of the denominators
    let lcm = crate::linalg::lcm_of_denominators(&row.normal);
    let factor = Rational::new(lcm, g);
    row.offset *= &factor;
    for x in row.normal.iter_mut() {
        *x *= &factor;
    }
}

/// Eliminates the equality rows in order, each by solving for its first
/// variable with coefficient `±1`. Returns the inequalities in the remaining
/// variables together with the map back to the original coordinates.
///
/// Because every pivot is a unit, the map restricted to integer points is a
/// bijection onto the lattice points of the affine hull, so volumes in the
/// reduced space are the volumes for the integral Lebesgue measure.
pub fn eliminate_equalities(h: &HalfspaceRep) -> Result<(HalfspaceRep, EmbeddingMap), GeometryError> {
    let mut map = EmbeddingMap::identity(h.dim);
    let mut rows: Vec<(usize, Halfspace)> = h.rows.iter().cloned().enumerate().collect();

    for &original in &h.equalities {
        let pos = rows
            .iter()
            .position(|(i, _)| *i == original)
            .expect("equality rows are removed only once");
        let (_, mut row) = rows.remove(pos);
        if row.normal.iter().all(Zero::is_zero) {
            if row.offset.is_zero() {
                continue;
            }
            return Err(GeometryError::InconsistentEqualities { row: original });
        }
        normalize_equality(&mut row);
        let Some(var) = row.normal.iter().position(|a| a.abs().is_one()) else {
            return Err(GeometryError::NoUnimodularPivot { row: original });
        };
        let (constant, slopes) = solve_for(&row, var);
        map.substitute(var, &constant, &slopes);
        for (_, r) in rows.iter_mut() {
            substitute_row(r, var, &constant, &slopes);
        }
    }

    let inequalities = rows.into_iter().map(|(_, r)| r).collect();
    Ok((HalfspaceRep::from_inequalities(map.reduced_dim(), inequalities)?, map))
}
