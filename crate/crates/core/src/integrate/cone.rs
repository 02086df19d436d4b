//! Contributions of simplicial tangent cones, regular and perturbed.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::ComputeError;
use crate::linalg::{binomial, dot, factorial, int_pow, scaled_integer_row};
use crate::polyhedra::SimplicialCone;
use crate::series::{expand_negative_linear, truncated_multiply, TruncatedSeries};
use crate::Rational;

use super::FractionSum;

/// Upper end of the range the perturbation parameter `t` is drawn from.
pub const PERTURBATION_SEED_MAX: u64 = 1 << 16;

/// Default number of draws before giving up on a random choice.
pub const DEFAULT_MAX_RETRIES: u32 = 64;

/// `M! / ((M+d)! L^M)`, the factor shared by all cones when the form is
/// `l' / L` with `l'` integral.
fn shared_factor(m: u32, d: usize, l_scale: &BigInt) -> Rational {
    let m = u64::from(m);
    Rational::new(factorial(m), factorial(m + d as u64) * int_pow(l_scale, m))
}

/// `vol(Π_C) <l, s>^(M+d) / Π_i <-l, u_i>` for integral `l`, as an unreduced
/// fraction, or `None` if `l` is orthogonal to a ray.
fn regular_parts(l: &[BigInt], m: u32, c: &SimplicialCone) -> Option<(BigInt, BigInt)> {
    let mut den = BigInt::one();
    for u in c.rays() {
        let v = dot(l, u);
        if v.is_zero() {
            return None;
        }
        den *= -v;
    }
    let (apex, s_scale) = c.integer_apex();
    let n = u64::from(m) + c.dim() as u64;
    let num = int_pow(&dot(l, apex), n) * c.par_volume();
    if !s_scale.is_one() {
        den *= int_pow(s_scale, n);
    }
    Some((num, den))
}

/// `M!/(M+d)! vol(Π_C) <l, s>^(M+d) / Π_i <-l, u_i>` for a cone with
/// `<l, u_i> ≠ 0` on every ray.
///
/// This is one summand of Brion's identity; only the sum over all vertex
/// cones of a polytope is an integral.
pub fn integrate_cone_regular(l: &[Rational], m: u32, c: &SimplicialCone) -> Result<Rational, ComputeError> {
    let (l, l_scale) = scaled_integer_row(l);
    let (num, den) = regular_parts(&l, m, c).ok_or(ComputeError::RegularityViolation)?;
    Ok(Rational::new(num, den) * shared_factor(m, c.dim(), &l_scale))
}

/// The direction `a` of a perturbation `l + ε a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbationVector {
    /// The moment-curve parameter `t`, or 0 for a vector given explicitly.
    pub seed: u64,
    pub components: Vec<BigInt>,
}

impl PerturbationVector {
    /// `a_i = (-t)^(i-1)`, a point on the moment curve with alternating signs.
    pub fn moment_curve(t: u64, dim: usize) -> Self {
        let minus_t = -BigInt::from(t);
        let mut components = Vec::with_capacity(dim);
        let mut acc = BigInt::one();
        for _ in 0..dim {
            components.push(acc.clone());
            acc *= &minus_t;
        }
        Self { seed: t, components }
    }

    /// An arbitrary direction, for replaying a specific perturbation.
    pub fn from_components(components: Vec<BigInt>) -> Self {
        Self { seed: 0, components }
    }

    /// Whether `l + ε a` is not identically zero on any ray of any cone.
    pub fn is_admissible<'a>(&self, l: &[Rational], cones: impl IntoIterator<Item = &'a SimplicialCone>) -> bool {
        let (l, _) = scaled_integer_row(l);
        self.avoids(&orthogonal_rays(&l, cones))
    }

    fn avoids(&self, rays: &[&[BigInt]]) -> bool {
        rays.iter().all(|u| !dot(&self.components, u).is_zero())
    }
}

/// The rays of `cones` on which the integral form `l` vanishes.
fn orthogonal_rays<'a>(l: &[BigInt], cones: impl IntoIterator<Item = &'a SimplicialCone>) -> Vec<&'a [BigInt]> {
    cones
        .into_iter()
        .flat_map(|c| c.rays())
        .filter(|u| dot(l, u).is_zero())
        .map(Vec::as_slice)
        .collect()
}

/// Draws `t` uniformly from `[1, 2^16]` until the moment-curve vector is
/// admissible for every cone.
pub fn pick_perturbation<R: Rng + ?Sized>(
    l: &[Rational],
    cones: &[&SimplicialCone],
    rng: &mut R,
    max_retries: u32,
) -> Result<PerturbationVector, ComputeError> {
    let (li, _) = scaled_integer_row(l);
    let rays = orthogonal_rays(&li, cones.iter().copied());
    for _ in 0..max_retries {
        let t = rng.gen_range(1..=PERTURBATION_SEED_MAX);
        let a = PerturbationVector::moment_curve(t, l.len());
        if a.avoids(&rays) {
            return Ok(a);
        }
    }
    Err(ComputeError::ExhaustedRetries {
        attempts: max_retries,
    })
}

/// Constant term in `ε` of the regular cone formula at `l + ε a`:
///
/// `M!/(M+d)! vol(Π_C) Res_{ε=0} (A + εB)^(M+d) / (ε Π_i -(c_i + ε e_i))`
///
/// with `A = <l, s>`, `B = <a, s>`, `c_i = <l, u_i>`, `e_i = <a, u_i>`. Rays
/// with `c_i = 0` raise the order of the pole at zero. Each remaining factor
/// is expanded as `(c_i + ε e_i)^{-1}`, an integer polynomial over
/// `c_i^(order)`, so no pole needs to be moved to an integer.
pub fn integrate_cone_residue(
    l: &[Rational],
    m: u32,
    a: &PerturbationVector,
    c: &SimplicialCone,
) -> Result<Rational, ComputeError> {
    let (l, l_scale) = scaled_integer_row(l);
    let (num, den) = residue_parts(&l, m, a, c)?;
    Ok(Rational::new(num, den) * shared_factor(m, c.dim(), &l_scale))
}

/// [`integrate_cone_residue`] for integral `l` without the shared factor.
fn residue_parts(
    l: &[BigInt],
    m: u32,
    a: &PerturbationVector,
    c: &SimplicialCone,
) -> Result<(BigInt, BigInt), ComputeError> {
    let mut pole_order = 1u32;
    let mut den = BigInt::one();
    let mut factors = Vec::new();
    for u in c.rays() {
        let ci = dot(l, u);
        let ei = dot(&a.components, u);
        match (ci.is_zero(), ei.is_zero()) {
            (true, true) => return Err(ComputeError::DivisionByZero),
            (true, false) => {
                pole_order += 1;
                den *= -ei;
            }
            (false, true) => den *= -ci,
            (false, false) => {
                den = -den;
                factors.push((ci, ei));
            }
        }
    }

    let k = pole_order as usize - 1;
    let n = u64::from(m) + c.dim() as u64;
    let (apex, s_scale) = c.integer_apex();
    let big_a = dot(l, apex);
    let big_b = dot(&a.components, apex);
    let mut poly = TruncatedSeries::new(
        (0..=k.min(n as usize))
            .map(|j| binomial(n, j as u64) * int_pow(&big_a, n - j as u64) * int_pow(&big_b, j as u64))
            .collect(),
        k,
    );
    for (ci, ei) in &factors {
        let factor = expand_negative_linear(ci, ei, 1, k)?;
        poly = truncated_multiply(&poly, &factor.integer_poly, k);
        den *= int_pow(&factor.scale_base, u64::from(factor.scale_exp));
    }
    if !s_scale.is_one() {
        den *= int_pow(s_scale, n);
    }
    Ok((poly.coeff(k) * c.par_volume(), den))
}

/// Integral of `<l, x>^M` over the region summed from `cones`, the
/// triangulated tangent cones of a polytope. Regular cones use the direct
/// formula and the others share one perturbation drawn from `rng`.
pub fn integrate_cones<R: Rng + ?Sized>(
    l: &[Rational],
    m: u32,
    cones: &[SimplicialCone],
    rng: &mut R,
    max_retries: u32,
) -> Result<Rational, ComputeError> {
    let (li, l_scale) = scaled_integer_row(l);
    let mut total = FractionSum::new();
    let mut irregular = Vec::new();
    for c in cones {
        match regular_parts(&li, m, c) {
            Some((num, den)) => total.add(num, den),
            None => irregular.push(c),
        }
    }
    if !irregular.is_empty() {
        let a = pick_perturbation(l, &irregular, rng, max_retries)?;
        for c in irregular {
            let (num, den) = residue_parts(&li, m, &a, c)?;
            total.add(num, den);
        }
    }
    Ok(total.finish() * shared_factor(m, l.len(), &l_scale))
}

/// Same as [`integrate_cones`] with a fixed perturbation for the cones that
/// need one.
pub fn integrate_cones_with(
    l: &[Rational],
    m: u32,
    cones: &[SimplicialCone],
    a: &PerturbationVector,
) -> Result<Rational, ComputeError> {
    let (li, l_scale) = scaled_integer_row(l);
    let mut total = FractionSum::new();
    for c in cones {
        let (num, den) = match regular_parts(&li, m, c) {
            Some(parts) => parts,
            None => residue_parts(&li, m, a, c)?,
        };
        total.add(num, den);
    }
    Ok(total.finish() * shared_factor(m, l.len(), &l_scale))
}

/// Volume from Brion's identity at `M = 0` with a random integer form whose
/// entries lie in `[-bound, bound]`, redrawn until it is regular on every
/// cone.
pub fn volume_from_cones<R: Rng + ?Sized>(
    cones: &[SimplicialCone],
    dim: usize,
    rng: &mut R,
    bound: i64,
    max_retries: u32,
) -> Result<Rational, ComputeError> {
    'draw: for _ in 0..max_retries {
        let l: Vec<BigInt> = (0..dim).map(|_| rng.gen_range(-bound..=bound).into()).collect();
        let mut total = FractionSum::new();
        for c in cones {
            match regular_parts(&l, 0, c) {
                Some((num, den)) => total.add(num, den),
                None => continue 'draw,
            }
        }
        let total = total.finish() / Rational::from_integer(factorial(dim as u64));
        debug_assert!(total.is_positive() || cones.is_empty());
        return Ok(total);
    }
    Err(ComputeError::ExhaustedRetries {
        attempts: max_retries,
    })
}
