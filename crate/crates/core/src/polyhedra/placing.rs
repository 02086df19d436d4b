//! Placing (beneath-beyond) triangulation of a point configuration.
//!
//! Points are given in homogeneous integer coordinates `(w, w*x)` with
//! `w > 0`. The first affinely independent points in input order form the
//! initial simplex; the remaining points are then placed in input order,
//! each one coned over the boundary facets it sees strictly.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::{BigInt, Sign};
use num_traits::Signed;

use crate::error::GeometryError;
use crate::linalg::{dot, kernel, primitive, EchelonBasis};

struct Facet {
    /// Sorted point indices.
    vertices: Vec<usize>,
    /// `normal . p > 0` for points strictly inside the current hull.
    normal: Vec<BigInt>,
    alive: bool,
}

/// The boundary of the current hull as a list of facets, with each ridge
/// mapped to the two facets that share it.
struct Boundary {
    facets: Vec<Facet>,
    ridges: BTreeMap<Vec<usize>, [usize; 2]>,
}

impl Boundary {
    fn add(&mut self, vertices: Vec<usize>, normal: Vec<BigInt>) -> usize {
        let id = self.facets.len();
        for k in 0..vertices.len() {
            let mut ridge = vertices.clone();
            ridge.remove(k);
            self.ridges
                .entry(ridge)
                .and_modify(|pair| pair[1] = id)
                .or_insert([id, usize::MAX]);
        }
        self.facets.push(Facet {
            vertices,
            normal,
            alive: true,
        });
        id
    }

    fn neighbor(&self, ridge: &[usize], id: usize) -> usize {
        let [a, b] = self.ridges[ridge];
        if a == id {
            b
        } else {
            a
        }
    }

    fn remove(&mut self, id: usize) {
        self.facets[id].alive = false;
        let vertices = self.facets[id].vertices.clone();
        for k in 0..vertices.len() {
            let mut ridge = vertices.clone();
            ridge.remove(k);
            let pair = self.ridges.get_mut(&ridge).expect("ridge of a live facet");
            if pair[0] == id {
                pair[0] = pair[1];
            }
            pair[1] = usize::MAX;
            if pair[0] == usize::MAX {
                self.ridges.remove(&ridge);
            }
        }
    }
}

fn initial_normal(points: &[Vec<BigInt>], vertices: &[usize], inside: usize) -> Vec<BigInt> {
    let rows: Vec<Vec<BigInt>> = vertices.iter().map(|&i| points[i].clone()).collect();
    let mut normal = kernel(&rows, points[inside].len())
        .pop()
        .expect("facet points span a hyperplane");
    match dot(&normal, &points[inside]).sign() {
        Sign::Minus => normal.iter_mut().for_each(|x| *x = -&*x),
        Sign::Plus => {}
        Sign::NoSign => unreachable!("interior witness lies on the facet"),
    }
    normal
}

/// Triangulates the convex hull of `points`. Returns the simplices as sorted
/// lists of `d + 1` point indices. Points in the interior of the hull of the
/// points placed before them are not used.
pub(crate) fn placing_triangulation(points: &[Vec<BigInt>]) -> Result<Vec<Vec<usize>>, GeometryError> {
    let Some(first) = points.first() else {
        return Err(GeometryError::Dimension { expected: 0, found: 0 });
    };
    let n = first.len();
    let d = n - 1;

    let mut basis = EchelonBasis::new();
    let mut initial = Vec::with_capacity(n);
    let mut order = Vec::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        if basis.rank() < n && basis.insert(p) {
            initial.push(i);
        } else {
            order.push(i);
        }
    }
    if initial.len() < n {
        return Err(GeometryError::Dimension {
            expected: d,
            found: initial.len().saturating_sub(1),
        });
    }

    let mut simplices = Vec::new();
    initial.sort_unstable();
    simplices.push(initial.clone());

    let mut boundary = Boundary {
        facets: Vec::new(),
        ridges: BTreeMap::new(),
    };
    for &omit in &initial {
        let vertices: Vec<usize> = initial.iter().copied().filter(|&v| v != omit).collect();
        let normal = initial_normal(points, &vertices, omit);
        boundary.add(vertices, normal);
    }

    for p in order {
        let point = &points[p];
        let visible: Vec<usize> = (0..boundary.facets.len())
            .filter(|&i| boundary.facets[i].alive && dot(&boundary.facets[i].normal, point).is_negative())
            .collect();
        if visible.is_empty() {
            continue;
        }

        // For a horizon ridge R between visible F and hidden G, the plane
        // through R and p is spanned by the planes of F and G:
        // (G.p) F - (F.p) G vanishes on R and on p, and is positive on the
        // vertex of F opposite R.
        let mut created = Vec::new();
        for &f in &visible {
            let facet = &boundary.facets[f];
            let mut simplex = facet.vertices.clone();
            simplex.push(p);
            simplex.sort_unstable();
            simplices.push(simplex);

            let fp = dot(&facet.normal, point);
            for k in 0..facet.vertices.len() {
                let mut ridge = facet.vertices.clone();
                ridge.remove(k);
                let g = boundary.neighbor(&ridge, f);
                let hidden = &boundary.facets[g];
                let gp = dot(&hidden.normal, point);
                if gp.is_negative() {
                    continue;
                }
                let normal: Vec<BigInt> = facet
                    .normal
                    .iter()
                    .zip(&hidden.normal)
                    .map(|(a, b)| &gp * a - &fp * b)
                    .collect();
                let mut vertices = ridge;
                vertices.push(p);
                vertices.sort_unstable();
                created.push((vertices, primitive(normal)));
            }
        }
        for f in visible {
            boundary.remove(f);
        }
        for (vertices, normal) in created {
            boundary.add(vertices, normal);
        }
    }
    Ok(simplices)
}
