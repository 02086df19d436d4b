//! Tangent cones at vertices and their triangulation into simplicial cones.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{dd, placing, Polytope, SimplicialCone};
use crate::error::GeometryError;
use crate::linalg::{dot, integer_row, primitive, rank};
use crate::{Point, Rational};

/// The cone of feasible directions at `vertex`, given by its extreme rays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentCone {
    pub vertex: Point,
    /// Primitive integer generators, sorted.
    pub rays: Vec<Vec<BigInt>>,
}

/// One tangent cone per vertex of `p`, in vertex order.
pub fn tangent_cones(p: &Polytope) -> Result<Vec<TangentCone>, GeometryError> {
    p.vertices().iter().map(|v| tangent_cone(p, v)).collect()
}

/// The tangent cone of `p` at `vertex`: extreme rays of
/// `{y : <a, y> >= 0 for every row tight at vertex}`.
pub fn tangent_cone(p: &Polytope, vertex: &[Rational]) -> Result<TangentCone, GeometryError> {
    let tight: Vec<Vec<BigInt>> = p
        .hrep()
        .rows()
        .iter()
        .filter(|h| h.evaluate(vertex).is_zero())
        .map(|h| primitive(integer_row(&h.normal)))
        .collect();
    let mut rays: Vec<Vec<BigInt>> = dd::extreme_rays(&tight, p.dim())
        .map_err(|_| GeometryError::NotPointed)?
        .into_iter()
        .map(|r| r.vector)
        .collect();
    rays.sort();
    Ok(TangentCone {
        vertex: vertex.to_vec(),
        rays,
    })
}

/// Splits `apex + cone(rays)` into simplicial cones with disjoint interiors.
///
/// The rays are cut by a hyperplane `<h, y> = 1` with `h` in the interior of
/// the dual cone, and the cut points are triangulated together with the
/// origin, which is placed first. Every simplex of that triangulation then
/// contains the origin, and the remaining `d` vertices span one cone.
pub fn triangulate_cone(apex: &[Rational], rays: &[Vec<BigInt>]) -> Result<Vec<SimplicialCone>, GeometryError> {
    let d = apex.len();
    if let Some(r) = rays.iter().find(|r| r.len() != d) {
        return Err(GeometryError::Mismatch {
            expected: d,
            found: r.len(),
        });
    }
    let found = rank(rays);
    if found < d {
        return Err(GeometryError::Dimension { expected: d, found });
    }
    if rays.len() == d {
        return Ok(alloc::vec![SimplicialCone::new(apex.to_vec(), rays.to_vec())?]);
    }

    let dual = dd::extreme_rays(rays, d).map_err(|_| GeometryError::NotPointed)?;
    if dual.is_empty() {
        return Err(GeometryError::NotPointed);
    }
    let mut h = alloc::vec![BigInt::zero(); d];
    for r in &dual {
        for (x, y) in h.iter_mut().zip(&r.vector) {
            *x += y;
        }
    }

    let mut points = Vec::with_capacity(rays.len() + 1);
    let mut origin = alloc::vec![BigInt::zero(); d + 1];
    origin[0] = BigInt::one();
    points.push(origin);
    for r in rays {
        let height = dot(&h, r);
        if !height.is_positive() {
            return Err(GeometryError::NotPointed);
        }
        let mut p = Vec::with_capacity(d + 1);
        p.push(height);
        p.extend(r.iter().cloned());
        points.push(p);
    }

    placing::placing_triangulation(&points)?
        .into_iter()
        .map(|simplex| {
            debug_assert_eq!(simplex[0], 0);
            let generators = simplex[1..].iter().map(|&i| rays[i - 1].clone()).collect();
            SimplicialCone::new(apex.to_vec(), generators)
        })
        .collect()
}
