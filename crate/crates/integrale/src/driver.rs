//! Loading inputs and evaluating a valuation, optionally on several threads.
//!
//! Geometry (vertices, triangulations, tangent cones) is computed once up
//! front. The terms of the integrand are then evaluated independently on a
//! worker pool and added in term order, so the result does not depend on the
//! number of threads.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use integrale_core::integrate::{ConePlan, IntegrationOptions, Method, SimplexPlan, Valuation};
use integrale_core::polyhedra::{
    dilate_to_integer, eliminate_equalities, tangent_cone, triangulate_cone, EmbeddingMap, Polytope,
};
use integrale_core::polynomial::{decompose_polynomial, parse_linear_form_list, parse_monomial_list, LinearFormSum};
use integrale_core::{ComputeError, Error, GeometryError, ParseError, Rational};
use num_traits::Zero;
use rayon::prelude::*;

use crate::format::{parse_polytope, FormatError, PolytopeFile};

/// Integrand text and how to read it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Integrand {
    /// `[[c,[e1,...,en]],...]`
    Monomials(String),
    /// `[[c,[M,[a1,...,an]]],...]`
    LinearForms(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Settings {
    pub method: Method,
    pub valuation: Valuation,
    pub seed: u64,
    pub threads: usize,
    /// Checked between terms, not inside one.
    pub timeout: Option<Duration>,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            method: Method::Triangulation,
            valuation: Valuation::Integral,
            seed: 0,
            threads: 1,
            timeout: None,
        }
    }
}

impl Settings {
    pub fn options(&self) -> IntegrationOptions {
        IntegrationOptions {
            seed: self.seed,
            ..IntegrationOptions::default()
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Format { path: PathBuf, source: FormatError },
    #[error("{}: {source}", path.display())]
    Integrand { path: PathBuf, source: ParseError },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Compute(#[from] ComputeError),
    #[error("gave up after {0:?}")]
    Timeout(Duration),
    #[error("{0} golden value(s) did not match")]
    Mismatch(usize),
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(p) => RunError::Integrand {
                path: PathBuf::from("<integrand>"),
                source: p,
            },
            Error::Geometry(g) => g.into(),
            Error::Compute(c) => c.into(),
        }
    }
}

impl RunError {
    /// Process exit status. 2 is left to command line usage errors.
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Io { .. } => 1,
            RunError::Usage(_) => 2,
            RunError::Format { source, .. } => match source {
                FormatError::Syntax { .. } => 3,
                FormatError::Geometry(_) => 4,
            },
            RunError::Integrand { .. } => 3,
            RunError::Geometry(_) => 4,
            RunError::Compute(_) => 5,
            RunError::Timeout(_) => 6,
            RunError::Mismatch(_) => 7,
        }
    }
}

pub fn read_file(path: &Path) -> Result<String, RunError> {
    std::fs::read_to_string(path).map_err(|source| RunError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// A full-dimensional polytope with integer vertices, and the map from its
/// coordinates back to the coordinates of the input file.
#[derive(Clone, Debug)]
pub struct Problem {
    pub polytope: Polytope,
    pub embedding: EmbeddingMap,
}

impl Problem {
    pub fn nvertices(&self) -> usize {
        self.polytope.vertices().len()
    }
}

pub fn load_polytope(path: &Path) -> Result<Problem, RunError> {
    let text = read_file(path)?;
    let file = parse_polytope(&text).map_err(|source| RunError::Format {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(prepare(file)?)
}

/// Removes equalities, computes the missing representation and dilates to
/// integer vertices.
pub fn prepare(file: PolytopeFile) -> Result<Problem, GeometryError> {
    let (polytope, embedding) = match file {
        PolytopeFile::Halfspaces(h) => {
            let (reduced, embedding) = eliminate_equalities(&h)?;
            (Polytope::from_hrep(reduced)?, embedding)
        }
        PolytopeFile::Vertices(v) => {
            let dim = v.dim();
            (Polytope::from_vrep(v)?, EmbeddingMap::identity(dim))
        }
    };
    let (_, polytope) = dilate_to_integer(&polytope);
    Ok(Problem { polytope, embedding })
}

/// Parses the integrand, checks it against the input dimension and rewrites
/// it as powers of linear forms in the polytope's coordinates.
pub fn prepare_integrand(integrand: &Integrand, embedding: &EmbeddingMap) -> Result<LinearFormSum, ParseError> {
    let (f, dim) = match integrand {
        Integrand::Monomials(text) => {
            let p = parse_monomial_list(text)?;
            let dim = p.dim();
            (decompose_polynomial(&p), dim)
        }
        Integrand::LinearForms(text) => {
            let f = parse_linear_form_list(text)?;
            let dim = f.dim();
            (f, dim)
        }
    };
    if dim != embedding.original_dim() {
        return Err(ParseError::new(
            0,
            format!(
                "integrand has {dim} variables but the polytope lives in dimension {}",
                embedding.original_dim()
            ),
        ));
    }
    Ok(embedding.pull_back(&f))
}

pub fn load_integrand(path: &Path, monomials: bool, embedding: &EmbeddingMap) -> Result<LinearFormSum, RunError> {
    let text = read_file(path)?;
    let integrand = if monomials {
        Integrand::Monomials(text)
    } else {
        Integrand::LinearForms(text)
    };
    prepare_integrand(&integrand, embedding).map_err(|source| RunError::Integrand {
        path: path.to_path_buf(),
        source,
    })
}

struct Deadline(Option<(Instant, Duration)>);

impl Deadline {
    fn start(timeout: Option<Duration>) -> Self {
        Self(timeout.map(|t| (Instant::now(), t)))
    }

    fn check(&self) -> Result<(), RunError> {
        match self.0 {
            Some((start, limit)) if start.elapsed() > limit => Err(RunError::Timeout(limit)),
            _ => Ok(()),
        }
    }
}

enum Plan {
    Simplices(SimplexPlan),
    Cones(ConePlan),
}

fn build_plan(p: &Polytope, settings: &Settings) -> Result<Plan, RunError> {
    match settings.method {
        Method::Triangulation => Ok(Plan::Simplices(SimplexPlan::new(p)?)),
        Method::ConeDecomposition => {
            let cones = p
                .vertices()
                .par_iter()
                .map(|v| {
                    let cone = tangent_cone(p, v)?;
                    triangulate_cone(&cone.vertex, &cone.rays)
                })
                .collect::<Result<Vec<_>, _>>()?
                .into_iter()
                .flatten()
                .collect();
            let alpha = p.dilation().map(|d| d.alpha.clone());
            Ok(Plan::Cones(ConePlan::from_cones(p.dim(), cones, alpha, settings.options())?))
        }
    }
}

fn with_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T, RunError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| RunError::Usage(format!("cannot start {threads} threads: {e}")))?;
    Ok(pool.install(f))
}

/// Evaluates the selected valuation. For [`Valuation::Volume`] the
/// integrand is ignored and may be empty.
pub fn evaluate(problem: &Problem, integrand: &LinearFormSum, settings: &Settings) -> Result<Rational, RunError> {
    let deadline = Deadline::start(settings.timeout);
    with_pool(settings.threads, || {
        let p = &problem.polytope;
        if settings.valuation == Valuation::Integral && integrand.is_empty() {
            return Ok(Rational::zero());
        }
        let plan = build_plan(p, settings)?;
        deadline.check()?;
        if settings.valuation == Valuation::Volume {
            return Ok(match &plan {
                Plan::Simplices(s) => s.volume(),
                Plan::Cones(c) => c.volume(),
            });
        }
        if integrand.dim() != p.dim() {
            return Err(GeometryError::Mismatch {
                expected: p.dim(),
                found: integrand.dim(),
            }
            .into());
        }
        let terms: Vec<_> = integrand.iter().collect();
        let values = terms
            .par_iter()
            .enumerate()
            .map(|(i, &t)| {
                deadline.check()?;
                Ok(match &plan {
                    Plan::Simplices(s) => s.integrate_term(t)?,
                    Plan::Cones(c) => c.integrate_term(t, i as u64)?,
                })
            })
            .collect::<Result<Vec<Rational>, RunError>>()?;
        Ok(values.into_iter().sum())
    })?
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_polytope;

    fn problem(text: &str) -> Problem {
        prepare(parse_polytope(text).unwrap()).unwrap()
    }

    fn run(p: &Problem, f: &Integrand, method: Method) -> Rational {
        let f = prepare_integrand(f, &p.embedding).unwrap();
        let settings = Settings {
            method,
            ..Settings::default()
        };
        evaluate(p, &f, &settings).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn triangle_both_methods() {
        let p = problem("vrep\n3 3\n1 1 1\n1 0 1\n1 1 0\n");
        let f = Integrand::Monomials("[[1,[1,0]],[1,[0,1]]]".into());
        assert_eq!(run(&p, &f, Method::Triangulation), q(2, 3));
        assert_eq!(run(&p, &f, Method::ConeDecomposition), q(2, 3));
    }

    #[test]
    fn equalities_are_pulled_back() {
        // x + y + z = 1, all >= 0; integrate x over the triangle in (y, z)
        let p = problem("4 4\n-1 1 1 1\n0 1 0 0\n0 0 1 0\n0 0 0 1\nlinearity 1 1\n");
        assert_eq!(p.polytope.dim(), 2);
        let f = Integrand::Monomials("[[1,[1,0,0]]]".into());
        assert_eq!(run(&p, &f, Method::Triangulation), q(1, 6));
        assert_eq!(run(&p, &f, Method::ConeDecomposition), q(1, 6));
    }

    #[test]
    fn wrong_integrand_dimension() {
        let p = problem("vrep\n3 3\n1 1 1\n1 0 1\n1 1 0\n");
        let err = prepare_integrand(&Integrand::Monomials("[[1,[1,0,0]]]".into()), &p.embedding).unwrap_err();
        assert!(err.message.contains("3 variables"));
    }

    #[test]
    fn zero_timeout_stops() {
        let p = problem("vrep\n3 3\n1 1 1\n1 0 1\n1 1 0\n");
        let f = prepare_integrand(&Integrand::Monomials("[[1,[1,0]]]".into()), &p.embedding).unwrap();
        let settings = Settings {
            timeout: Some(Duration::ZERO),
            ..Settings::default()
        };
        let err = evaluate(&p, &f, &settings).unwrap_err();
        assert_eq!(err.exit_code(), 6);
    }
}
