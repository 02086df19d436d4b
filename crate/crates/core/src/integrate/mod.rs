//! Integration of sums of powers of linear forms over polytopes.
//!
//! Two pipelines are provided. [`SimplexPlan`] triangulates the polytope and
//! integrates every term over every simplex. [`ConePlan`] triangulates the
//! tangent cones and sums their contributions, perturbing the linear form
//! where it is orthogonal to a ray.
//!
//! A plan is built once per polytope; [`SimplexPlan::integrate_term`] and
//! [`ConePlan::integrate_term`] are independent per term, so callers may
//! evaluate terms in any order or in parallel and add the results.

mod cone;
mod simplex;

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{ComputeError, Error};
use crate::linalg::int_pow;
use crate::polyhedra::{tangent_cones, triangulate_cone, triangulate_polytope, Polytope, Simplex, SimplicialCone};
use crate::polynomial::{LinearFormSum, Term};
use crate::Rational;

pub use cone::{
    integrate_cone_regular, integrate_cone_residue, integrate_cones, integrate_cones_with, pick_perturbation,
    volume_from_cones, PerturbationVector, DEFAULT_MAX_RETRIES, PERTURBATION_SEED_MAX,
};
pub use simplex::{integrate_simplex, integrate_simplex_regular, integrate_simplex_residue, integrate_simplices};

/// Default bound on the entries of the random form used for volumes.
pub const DEFAULT_VOLUME_FORM_BOUND: i64 = 10_000;

/// Stream reserved for the volume draw; term `i` uses stream `i`.
const VOLUME_STREAM: u64 = u64::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Triangulation,
    ConeDecomposition,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Integral,
    Volume,
}

/// Knobs for the randomized parts of the cone pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntegrationOptions {
    pub seed: u64,
    pub max_retries: u32,
    pub volume_form_bound: i64,
}

impl Default for IntegrationOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            max_retries: DEFAULT_MAX_RETRIES,
            volume_form_bound: DEFAULT_VOLUME_FORM_BOUND,
        }
    }
}

impl IntegrationOptions {
    /// The generator for term `index`: the same seed and index always give
    /// the same draws, whatever order the terms are evaluated in.
    pub fn rng_for(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }
}

fn dilation_factor(alpha: &Option<BigInt>, dim: usize, power: u32) -> Rational {
    match alpha {
        Some(a) => Rational::new(BigInt::one(), int_pow(a, dim as u64 + u64::from(power))),
        None => Rational::one(),
    }
}

/// A sum of fractions kept over the lcm of their denominators and reduced
/// once at the end.
struct FractionSum {
    num: BigInt,
    den: BigInt,
}

impl FractionSum {
    fn new() -> Self {
        Self {
            num: BigInt::zero(),
            den: BigInt::one(),
        }
    }

    fn add(&mut self, num: BigInt, den: BigInt) {
        if den == self.den {
            self.num += num;
            return;
        }
        let g = self.den.gcd(&den);
        let own = &den / &g;
        self.num = &self.num * &own + num * (&self.den / &g);
        self.den *= own;
    }

    fn finish(self) -> Rational {
        Rational::new(self.num, self.den)
    }
}

fn is_zero_form(form: &[Rational]) -> bool {
    form.iter().all(Zero::is_zero)
}

/// A triangulation of a polytope, ready to integrate terms over.
#[derive(Clone, Debug)]
pub struct SimplexPlan {
    dim: usize,
    simplices: Vec<Simplex>,
    alpha: Option<BigInt>,
    volume: Rational,
}

impl SimplexPlan {
    /// Triangulates `p`. If `p` records a dilation, results refer to the
    /// undilated polytope.
    pub fn new(p: &Polytope) -> Result<Self, Error> {
        let simplices = triangulate_polytope(p)?;
        Ok(Self::from_simplices(p.dim(), simplices, p.dilation().map(|d| d.alpha.clone())))
    }

    pub fn from_simplices(dim: usize, simplices: Vec<Simplex>, alpha: Option<BigInt>) -> Self {
        let volume = simplices.iter().map(Simplex::volume).sum();
        Self {
            dim,
            simplices,
            alpha,
            volume,
        }
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn volume(&self) -> Rational {
        self.volume.clone() * dilation_factor(&self.alpha, self.dim, 0)
    }

    /// `coefficient * ∫ <form, x>^power` over the polytope.
    pub fn integrate_term(&self, term: Term<'_>) -> Result<Rational, ComputeError> {
        let raw = if is_zero_form(term.form) {
            if term.power == 0 {
                self.volume.clone()
            } else {
                Rational::zero()
            }
        } else {
            integrate_simplices(term.form, term.power, &self.simplices)?
        };
        Ok(raw * term.coefficient * dilation_factor(&self.alpha, self.dim, term.power))
    }

    pub fn integrate(&self, f: &LinearFormSum) -> Result<Rational, ComputeError> {
        f.iter()
            .try_fold(Rational::zero(), |acc, t| Ok(acc + self.integrate_term(t)?))
    }
}

/// Simplicial cones covering the tangent cones of every vertex.
pub fn decompose_tangent_cones(p: &Polytope) -> Result<Vec<SimplicialCone>, Error> {
    let mut out = Vec::new();
    for cone in tangent_cones(p)? {
        out.extend(triangulate_cone(&cone.vertex, &cone.rays)?);
    }
    Ok(out)
}

/// The triangulated tangent cones of a polytope.
#[derive(Clone, Debug)]
pub struct ConePlan {
    dim: usize,
    cones: Vec<SimplicialCone>,
    alpha: Option<BigInt>,
    options: IntegrationOptions,
    volume: Rational,
}

impl ConePlan {
    pub fn new(p: &Polytope, options: IntegrationOptions) -> Result<Self, Error> {
        let cones = decompose_tangent_cones(p)?;
        Ok(Self::from_cones(p.dim(), cones, p.dilation().map(|d| d.alpha.clone()), options)?)
    }

    /// Computes the volume up front; it is needed for constant terms.
    pub fn from_cones(
        dim: usize,
        cones: Vec<SimplicialCone>,
        alpha: Option<BigInt>,
        options: IntegrationOptions,
    ) -> Result<Self, ComputeError> {
        let mut rng = options.rng_for(VOLUME_STREAM);
        let volume = volume_from_cones(&cones, dim, &mut rng, options.volume_form_bound, options.max_retries)?;
        Ok(Self {
            dim,
            cones,
            alpha,
            options,
            volume,
        })
    }

    pub fn cones(&self) -> &[SimplicialCone] {
        &self.cones
    }

    pub fn volume(&self) -> Rational {
        self.volume.clone() * dilation_factor(&self.alpha, self.dim, 0)
    }

    /// `coefficient * ∫ <form, x>^power` over the polytope. `index` selects
    /// the random stream used if a perturbation is needed.
    pub fn integrate_term(&self, term: Term<'_>, index: u64) -> Result<Rational, ComputeError> {
        self.evaluate(term, |form, power| {
            let mut rng = self.options.rng_for(index);
            integrate_cones(form, power, &self.cones, &mut rng, self.options.max_retries)
        })
    }

    /// Like [`Self::integrate_term`] with a fixed perturbation direction.
    pub fn integrate_term_with(&self, term: Term<'_>, a: &PerturbationVector) -> Result<Rational, ComputeError> {
        self.evaluate(term, |form, power| integrate_cones_with(form, power, &self.cones, a))
    }

    fn evaluate(
        &self,
        term: Term<'_>,
        body: impl FnOnce(&[Rational], u32) -> Result<Rational, ComputeError>,
    ) -> Result<Rational, ComputeError> {
        let raw = if is_zero_form(term.form) {
            if term.power == 0 {
                self.volume.clone()
            } else {
                Rational::zero()
            }
        } else {
            body(term.form, term.power)?
        };
        Ok(raw * term.coefficient * dilation_factor(&self.alpha, self.dim, term.power))
    }

    pub fn integrate(&self, f: &LinearFormSum) -> Result<Rational, ComputeError> {
        f.iter()
            .enumerate()
            .try_fold(Rational::zero(), |acc, (i, t)| Ok(acc + self.integrate_term(t, i as u64)?))
    }
}

/// A polytope, an integrand in the polytope's coordinates, and what to do
/// with them.
#[derive(Clone, Debug)]
pub struct IntegrationRequest {
    pub polytope: Polytope,
    pub integrand: LinearFormSum,
    pub method: Method,
    pub valuation: Valuation,
}

/// Sequential evaluation of a request. For the volume valuation the
/// integrand is ignored.
pub fn integrate(req: &IntegrationRequest, options: IntegrationOptions) -> Result<Rational, Error> {
    if req.valuation == Valuation::Integral && req.integrand.dim() != req.polytope.dim() {
        return Err(crate::error::GeometryError::Mismatch {
            expected: req.polytope.dim(),
            found: req.integrand.dim(),
        }
        .into());
    }
    match (req.method, req.valuation) {
        (Method::Triangulation, Valuation::Volume) => volume_triangulation(&req.polytope),
        (Method::ConeDecomposition, Valuation::Volume) => volume_cone_decomposition(&req.polytope, options),
        (Method::Triangulation, Valuation::Integral) => integrate_via_triangulation(&req.polytope, &req.integrand),
        (Method::ConeDecomposition, Valuation::Integral) => {
            integrate_via_cone_decomposition(&req.polytope, &req.integrand, options)
        }
    }
}

pub fn integrate_via_triangulation(p: &Polytope, f: &LinearFormSum) -> Result<Rational, Error> {
    if f.is_empty() {
        return Ok(Rational::zero());
    }
    Ok(SimplexPlan::new(p)?.integrate(f)?)
}

pub fn integrate_via_cone_decomposition(
    p: &Polytope,
    f: &LinearFormSum,
    options: IntegrationOptions,
) -> Result<Rational, Error> {
    if f.is_empty() {
        return Ok(Rational::zero());
    }
    Ok(ConePlan::new(p, options)?.integrate(f)?)
}

pub fn volume_triangulation(p: &Polytope) -> Result<Rational, Error> {
    Ok(SimplexPlan::new(p)?.volume())
}

pub fn volume_cone_decomposition(p: &Polytope, options: IntegrationOptions) -> Result<Rational, Error> {
    Ok(ConePlan::new(p, options)?.volume())
}

#[cfg(test)]
mod tests;
