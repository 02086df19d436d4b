//! Polytopes in halfspace and vertex form, conversions between the two,
//! tangent cones, triangulations and dilation to integer vertices.
//!
//! Both conversions run the double description method on a homogenized
//! cone. A halfspace `b + <a, x> >= 0` becomes the row `(b, a)` acting on
//! `(λ, x)`, and a point `v` becomes the row `(1, v)` acting on `(b, a)`.

mod cones;
mod dd;
mod equality;
mod placing;

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::GeometryError;
use crate::linalg::{
    dot_rational, integer_row, kernel, lcm_of_denominators, primitive, rank, rank_rational, scaled_integer_row, to_rational,
};
use crate::{Point, Rational};

pub use cones::{tangent_cone, tangent_cones, triangulate_cone, TangentCone};
pub use equality::{eliminate_equalities, EmbeddingMap};

/// The closed halfspace `offset + <normal, x> >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Halfspace {
    pub offset: Rational,
    pub normal: Vec<Rational>,
}

impl Halfspace {
    pub fn new(offset: Rational, normal: Vec<Rational>) -> Self {
        Self { offset, normal }
    }

    pub fn evaluate(&self, x: &[Rational]) -> Rational {
        &self.offset + dot_rational(&self.normal, x)
    }

    /// `(b, a)` scaled to a primitive integer row.
    fn integer_row(&self) -> Vec<BigInt> {
        let mut row = Vec::with_capacity(self.normal.len() + 1);
        row.push(self.offset.clone());
        row.extend(self.normal.iter().cloned());
        primitive(integer_row(&row))
    }
}

impl fmt::Display for Halfspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.offset)?;
        for a in &self.normal {
            write!(f, " {a}")?;
        }
        Ok(())
    }
}

/// A list of halfspaces in `dim` variables; rows listed in `equalities` are
/// read as `b + <a, x> = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfspaceRep {
    dim: usize,
    rows: Vec<Halfspace>,
    equalities: BTreeSet<usize>,
}

impl HalfspaceRep {
    /// Validates row lengths and normalizes: rows with a zero normal are
    /// dropped when they hold trivially and rejected when they cannot hold.
    pub fn new(dim: usize, rows: Vec<Halfspace>, equalities: BTreeSet<usize>) -> Result<Self, GeometryError> {
        let mut kept = Vec::with_capacity(rows.len());
        let mut kept_eq = BTreeSet::new();
        for (i, row) in rows.into_iter().enumerate() {
            if row.normal.len() != dim {
                return Err(GeometryError::Mismatch {
                    expected: dim,
                    found: row.normal.len(),
                });
            }
            let is_eq = equalities.contains(&i);
            if row.normal.iter().all(Zero::is_zero) {
                let holds = if is_eq {
                    row.offset.is_zero()
                } else {
                    !row.offset.is_negative()
                };
                if holds {
                    continue;
                }
                return Err(GeometryError::Infeasible);
            }
            if is_eq {
                kept_eq.insert(kept.len());
            }
            kept.push(row);
        }
        Ok(Self {
            dim,
            rows: kept,
            equalities: kept_eq,
        })
    }

    /// Inequalities only.
    pub fn from_inequalities(dim: usize, rows: Vec<Halfspace>) -> Result<Self, GeometryError> {
        Self::new(dim, rows, BTreeSet::new())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Halfspace] {
        &self.rows
    }

    pub fn equalities(&self) -> &BTreeSet<usize> {
        &self.equalities
    }

    pub fn is_equality(&self, row: usize) -> bool {
        self.equalities.contains(&row)
    }

    /// Whether `x` satisfies every row.
    pub fn contains(&self, x: &[Rational]) -> bool {
        self.rows.iter().enumerate().all(|(i, h)| {
            let v = h.evaluate(x);
            if self.is_equality(i) {
                v.is_zero()
            } else {
                !v.is_negative()
            }
        })
    }

    /// Integer rows `(b, a)` with every equality split into two inequalities.
    fn inequality_rows(&self) -> Vec<Vec<BigInt>> {
        let mut out = Vec::with_capacity(self.rows.len() + self.equalities.len());
        for (i, h) in self.rows.iter().enumerate() {
            let row = h.integer_row();
            if self.is_equality(i) {
                out.push(row.iter().map(|x| -x).collect());
            }
            out.push(row);
        }
        out
    }
}

/// A finite point set, understood through its convex hull.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexRep {
    dim: usize,
    vertices: Vec<Point>,
}

impl VertexRep {
    /// Sorts and deduplicates the points. Non-extreme points are only removed
    /// when the representation is turned into a [`Polytope`].
    pub fn new(dim: usize, mut vertices: Vec<Point>) -> Result<Self, GeometryError> {
        if let Some(v) = vertices.iter().find(|v| v.len() != dim) {
            return Err(GeometryError::Mismatch {
                expected: dim,
                found: v.len(),
            });
        }
        vertices.sort();
        vertices.dedup();
        Ok(Self { dim, vertices })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }
}

/// Homogeneous integer coordinates `(w, w * v)` with `w > 0` primitive.
fn homogenize(v: &[Rational]) -> Vec<BigInt> {
    let w = lcm_of_denominators(v);
    let mut row = Vec::with_capacity(v.len() + 1);
    row.push(w.clone());
    row.extend(v.iter().map(|x| x.numer() * (&w / x.denom())));
    row
}

fn affine_rank(points: &[Point]) -> usize {
    let rows: Vec<Vec<BigInt>> = points.iter().map(|p| homogenize(p)).collect();
    rank(&rows).saturating_sub(1)
}

/// Vertices of the polytope `{x : h}`.
///
/// Errors with `Infeasible` for an empty set, `Unbounded` when the set
/// contains a ray, and `Dimension` when it is not full-dimensional.
pub fn enumerate_vertices(h: &HalfspaceRep) -> Result<VertexRep, GeometryError> {
    let d = h.dim;
    let mut rows = h.inequality_rows();
    let mut lambda = vec![BigInt::zero(); d + 1];
    lambda[0] = BigInt::one();
    rows.push(lambda);

    let rays = match dd::extreme_rays(&rows, d + 1) {
        Ok(rays) => rays,
        Err(_) => {
            // A line in the homogenized cone: any feasible point makes the
            // set unbounded. Cut the lines out to decide feasibility.
            let normals: Vec<Vec<BigInt>> = rows.iter().map(|r| r[1..].to_vec()).collect();
            for k in kernel(&normals, d) {
                let mut up = vec![BigInt::zero()];
                up.extend(k.iter().cloned());
                rows.push(up);
                let mut down = vec![BigInt::zero()];
                down.extend(k.iter().map(|x| -x));
                rows.push(down);
            }
            let rays = dd::extreme_rays(&rows, d + 1).expect("lines removed");
            return Err(if rays.iter().any(|r| r.vector[0].is_positive()) {
                GeometryError::Unbounded
            } else {
                GeometryError::Infeasible
            });
        }
    };

    let (points, directions): (Vec<_>, Vec<_>) = rays.into_iter().partition(|r| r.vector[0].is_positive());
    if points.is_empty() {
        return Err(GeometryError::Infeasible);
    }
    if !directions.is_empty() {
        return Err(GeometryError::Unbounded);
    }
    let vertices: Vec<Point> = points
        .into_iter()
        .map(|r| {
            let w = &r.vector[0];
            r.vector[1..]
                .iter()
                .map(|x| Rational::new(x.clone(), w.clone()))
                .collect()
        })
        .collect();
    let found = affine_rank(&vertices);
    if found < d {
        return Err(GeometryError::Dimension { expected: d, found });
    }
    VertexRep::new(d, vertices)
}

/// Irredundant facets of the hull of `v`, each scaled to a primitive
/// integer row and sorted.
pub fn enumerate_facets(v: &VertexRep) -> Result<HalfspaceRep, GeometryError> {
    let d = v.dim;
    let rows: Vec<Vec<BigInt>> = v.vertices.iter().map(|p| homogenize(p)).collect();
    let rays = dd::extreme_rays(&rows, d + 1).map_err(|e| GeometryError::Dimension {
        expected: d,
        found: e.rank.saturating_sub(1),
    })?;
    let mut facets: Vec<Halfspace> = rays
        .into_iter()
        .filter(|r| r.vector[1..].iter().any(|x| !x.is_zero()))
        .map(|r| {
            let row = to_rational(&r.vector);
            Halfspace::new(row[0].clone(), row[1..].to_vec())
        })
        .collect();
    facets.sort();
    HalfspaceRep::from_inequalities(d, facets)
}

/// A simplex with `d + 1` affinely independent vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simplex {
    vertices: Vec<Point>,
    det_abs: Rational,
    scaled: Vec<Vec<BigInt>>,
    scale: BigInt,
}

impl Simplex {
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeometryError> {
        let d = vertices.len().saturating_sub(1);
        if let Some(v) = vertices.iter().find(|v| v.len() != d) {
            return Err(GeometryError::Mismatch {
                expected: d,
                found: v.len(),
            });
        }
        let last = &vertices[d];
        let edges: Vec<Vec<Rational>> = vertices[..d]
            .iter()
            .map(|v| v.iter().zip(last).map(|(a, b)| a - b).collect())
            .collect();
        let det_abs = crate::linalg::det_rational(&edges).abs();
        if det_abs.is_zero() {
            return Err(GeometryError::Dimension {
                expected: d,
                found: rank_rational(&edges),
            });
        }
        let scale = lcm_of_denominators(vertices.iter().flatten());
        let scaled = vertices
            .iter()
            .map(|v| v.iter().map(|x| x.numer() * (&scale / x.denom())).collect())
            .collect();
        Ok(Self {
            vertices,
            det_abs,
            scaled,
            scale,
        })
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// `d!` times the volume.
    pub fn det_abs(&self) -> &Rational {
        &self.det_abs
    }

    /// Integer points `w_i` and the common denominator `D` with
    /// `vertices[i] = w_i / D`.
    pub fn integer_vertices(&self) -> (&[Vec<BigInt>], &BigInt) {
        (&self.scaled, &self.scale)
    }

    pub fn volume(&self) -> Rational {
        &self.det_abs / Rational::from_integer(crate::linalg::factorial(self.dim() as u64))
    }
}

/// `apex + cone(rays)` for `d` linearly independent primitive integer rays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialCone {
    apex: Point,
    rays: Vec<Vec<BigInt>>,
    par_volume: BigInt,
    scaled_apex: Vec<BigInt>,
    apex_scale: BigInt,
}

impl SimplicialCone {
    /// Divides each ray by the gcd of its entries and computes the volume of
    /// the fundamental parallelepiped.
    pub fn new(apex: Point, rays: Vec<Vec<BigInt>>) -> Result<Self, GeometryError> {
        let d = apex.len();
        if rays.len() != d {
            return Err(GeometryError::Mismatch {
                expected: d,
                found: rays.len(),
            });
        }
        if let Some(r) = rays.iter().find(|r| r.len() != d) {
            return Err(GeometryError::Mismatch {
                expected: d,
                found: r.len(),
            });
        }
        let rays: Vec<Vec<BigInt>> = rays.into_iter().map(primitive).collect();
        let par_volume = crate::linalg::bareiss_det(rays.clone()).abs();
        if par_volume.is_zero() {
            return Err(GeometryError::Dimension {
                expected: d,
                found: rank(&rays),
            });
        }
        let (scaled_apex, apex_scale) = scaled_integer_row(&apex);
        Ok(Self {
            apex,
            rays,
            par_volume,
            scaled_apex,
            apex_scale,
        })
    }

    pub fn dim(&self) -> usize {
        self.apex.len()
    }

    pub fn apex(&self) -> &[Rational] {
        &self.apex
    }

    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    pub fn par_volume(&self) -> &BigInt {
        &self.par_volume
    }

    /// The apex as an integer point over a common denominator.
    pub fn integer_apex(&self) -> (&[BigInt], &BigInt) {
        (&self.scaled_apex, &self.apex_scale)
    }
}

/// Records that a polytope was scaled by `alpha` to reach integer vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dilation {
    pub alpha: BigInt,
    pub original_vertices: Vec<Point>,
}

/// A bounded full-dimensional polytope with both representations computed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    hrep: HalfspaceRep,
    vrep: VertexRep,
    dilation: Option<Dilation>,
}

impl Polytope {
    /// The rows are kept as given (possibly redundant); vertices are computed.
    pub fn from_hrep(hrep: HalfspaceRep) -> Result<Self, GeometryError> {
        let vrep = enumerate_vertices(&hrep)?;
        Ok(Self {
            hrep,
            vrep,
            dilation: None,
        })
    }

    /// Computes the facets and drops input points that are not vertices.
    pub fn from_vrep(vrep: VertexRep) -> Result<Self, GeometryError> {
        let hrep = enumerate_facets(&vrep)?;
        let d = vrep.dim;
        let vertices = vrep
            .vertices
            .into_iter()
            .filter(|v| {
                let tight: Vec<Vec<Rational>> = hrep
                    .rows
                    .iter()
                    .filter(|h| h.evaluate(v).is_zero())
                    .map(|h| h.normal.clone())
                    .collect();
                tight.len() >= d && rank_rational(&tight) == d
            })
            .collect();
        Ok(Self {
            hrep,
            vrep: VertexRep { dim: d, vertices },
            dilation: None,
        })
    }

    pub fn from_vertices(dim: usize, vertices: Vec<Point>) -> Result<Self, GeometryError> {
        Self::from_vrep(VertexRep::new(dim, vertices)?)
    }

    pub fn dim(&self) -> usize {
        self.vrep.dim
    }

    pub fn hrep(&self) -> &HalfspaceRep {
        &self.hrep
    }

    pub fn vrep(&self) -> &VertexRep {
        &self.vrep
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vrep.vertices
    }

    pub fn dilation(&self) -> Option<&Dilation> {
        self.dilation.as_ref()
    }

    /// Every vertex satisfies every row, and the rows have exactly these
    /// vertices.
    pub fn representations_agree(&self) -> bool {
        self.vertices().iter().all(|v| self.hrep.contains(v))
            && enumerate_vertices(&self.hrep).is_ok_and(|v| v.vertices == self.vrep.vertices)
    }
}

/// Scales `p` by the least common denominator `alpha` of its vertex
/// coordinates so that every vertex becomes an integer point.
pub fn dilate_to_integer(p: &Polytope) -> (BigInt, Polytope) {
    let alpha = lcm_of_denominators(p.vertices().iter().flatten());
    if alpha.is_one() {
        return (alpha, p.clone());
    }
    let a = Rational::from_integer(alpha.clone());
    let vertices = p
        .vertices()
        .iter()
        .map(|v| v.iter().map(|x| x * &a).collect())
        .collect();
    let rows = p
        .hrep
        .rows
        .iter()
        .map(|h| Halfspace::new(&h.offset * &a, h.normal.clone()))
        .collect();
    let q = Polytope {
        hrep: HalfspaceRep {
            dim: p.hrep.dim,
            rows,
            equalities: p.hrep.equalities.clone(),
        },
        vrep: VertexRep {
            dim: p.dim(),
            vertices,
        },
        dilation: Some(Dilation {
            alpha: alpha.clone(),
            original_vertices: p.vertices().to_vec(),
        }),
    };
    (alpha, q)
}

/// Triangulates `p` by placing its vertices in lexicographic order.
pub fn triangulate_polytope(p: &Polytope) -> Result<Vec<Simplex>, GeometryError> {
    let points: Vec<Vec<BigInt>> = p.vertices().iter().map(|v| homogenize(v)).collect();
    placing::placing_triangulation(&points)?
        .into_iter()
        .map(|s| Simplex::new(s.into_iter().map(|i| p.vertices()[i].clone()).collect()))
        .collect()
}
