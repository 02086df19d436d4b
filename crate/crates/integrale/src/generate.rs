//! Instance generators for the experiment suites.

use std::collections::BTreeSet;

use integrale_core::linalg::rank_rational;
use integrale_core::polyhedra::{Halfspace, HalfspaceRep, VertexRep};
use integrale_core::polynomial::{ExponentVector, MonomialSum};
use integrale_core::{Point, Rational};
use num_traits::{One, Zero};
use rand::Rng;

fn int(x: i64) -> Rational {
    Rational::from_integer(x.into())
}

/// A single monomial of total degree `degree` in `dim` variables, built by
/// raising a uniformly chosen variable by one, `degree` times.
pub fn generate_random_monomial<R: Rng + ?Sized>(dim: usize, degree: u32, rng: &mut R) -> MonomialSum {
    assert!(dim >= 1, "need at least one variable");
    let mut exps = vec![0u32; dim];
    for _ in 0..degree {
        exps[rng.gen_range(0..dim)] += 1;
    }
    let mut p = MonomialSum::new(dim);
    p.add_term(Rational::one(), ExponentVector::new(exps));
    p
}

/// The `k + d` points `(t, t^2, ..., t^d)` for `t = 5, ..., 5 + k + d - 1`.
pub fn generate_cyclic_polytope(dim: usize, k: usize) -> VertexRep {
    let points = (0..k + dim)
        .map(|i| {
            let t = 5 + i as i64;
            (1..=dim as u32).map(|e| int(t.pow(e))).collect()
        })
        .collect();
    VertexRep::new(dim, points).expect("points have the right length")
}

/// `dim + 1` affinely independent integer points with coordinates in
/// `[0, bound]`.
pub fn generate_random_simplex<R: Rng + ?Sized>(dim: usize, bound: i64, rng: &mut R) -> VertexRep {
    loop {
        let points: Vec<Point> = (0..=dim)
            .map(|_| (0..dim).map(|_| int(rng.gen_range(0..=bound))).collect())
            .collect();
        let edges: Vec<Vec<Rational>> = points[1..]
            .iter()
            .map(|p| p.iter().zip(&points[0]).map(|(a, b)| a - b).collect())
            .collect();
        if rank_rational(&edges) == dim {
            return VertexRep::new(dim, points).expect("points have the right length");
        }
    }
}

/// Row `offset + sum coefficient * n_i >= 0` over 1-based variable indices.
fn row(dim: usize, offset: Rational, terms: &[(usize, i64)]) -> Halfspace {
    let mut normal = vec![Rational::zero(); dim];
    for &(i, c) in terms {
        normal[i - 1] += int(c);
    }
    Halfspace::new(offset, normal)
}

fn nonnegativity(dim: usize) -> impl Iterator<Item = Halfspace> {
    (1..=dim).map(move |i| row(dim, Rational::zero(), &[(i, 1)]))
}

fn block(range: std::ops::RangeInclusive<usize>, sign: i64) -> Vec<(usize, i64)> {
    range.map(|i| (i, sign)).collect()
}

/// Voters split over the rankings `abc, acb, bac, bca, cab, cba`
/// (`n1..n6`, summing to 1): `a` wins the plurality vote, `b` is second
/// and `c` third, no majority for `a`, and a majority prefers `b` to `a`.
/// Strict inequalities are closed.
pub fn three_candidate_polytope() -> HalfspaceRep {
    let d = 6;
    let half = Rational::new(1.into(), 2.into());
    let mut rows = vec![
        row(d, int(0), &[(1, 1), (2, 1), (3, -1), (4, -1)]),
        row(d, int(0), &[(3, 1), (4, 1), (5, -1), (6, -1)]),
        row(d, half, &[(1, -1), (2, -1), (5, -1)]),
        row(d, int(-1), &block(1..=6, 1)),
    ];
    rows.extend(nonnegativity(d));
    HalfspaceRep::new(d, rows, BTreeSet::from([3])).expect("rows have the right length")
}

/// The same question for four candidates, with `n1..n24` over the rankings
/// in lexicographic order (`abcd, abdc, ..., dcba`): first preferences
/// ordered `a > b > c > d`, `a` below one half, and the voters preferring
/// `a` to `b` below one half.
pub fn four_candidate_polytope() -> HalfspaceRep {
    let d = 24;
    let half = Rational::new(1.into(), 2.into());
    let first = |block_index: usize| (6 * block_index + 1)..=(6 * block_index + 6);
    let mut rows = Vec::new();
    for b in 0..3 {
        let mut terms = block(first(b), 1);
        terms.extend(block(first(b + 1), -1));
        rows.push(row(d, int(0), &terms));
    }
    rows.push(row(d, half.clone(), &block(first(0), -1)));
    let a_over_b: Vec<(usize, i64)> = rankings(4)
        .iter()
        .enumerate()
        .filter(|(_, r)| r.iter().position(|&c| c == 0) < r.iter().position(|&c| c == 1))
        .map(|(i, _)| (i + 1, -1))
        .collect();
    rows.push(row(d, half, &a_over_b));
    rows.push(row(d, int(-1), &block(1..=24, 1)));
    let equality = rows.len() - 1;
    rows.extend(nonnegativity(d));
    HalfspaceRep::new(d, rows, BTreeSet::from([equality])).expect("rows have the right length")
}

/// All permutations of `0..n` in lexicographic order.
fn rankings(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for rest in rankings(n - 1) {
            let mut r = vec![first];
            r.extend(rest.into_iter().map(|x| if x >= first { x + 1 } else { x }));
            out.push(r);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn monomials() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = generate_random_monomial(3, 0, &mut rng);
        assert_eq!(c.coefficient(&ExponentVector::zero(3)), Rational::one());
        let x = generate_random_monomial(1, 7, &mut rng);
        assert_eq!(x.coefficient(&ExponentVector::new(vec![7])), Rational::one());

        let a = generate_random_monomial(3, 5, &mut ChaCha8Rng::seed_from_u64(9));
        let b = generate_random_monomial(3, 5, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
        let (e, _) = a.iter().next().unwrap();
        assert_eq!(e.degree(), 5);
    }

    #[test]
    fn cyclic_points() {
        let v = generate_cyclic_polytope(2, 1);
        assert_eq!(v.vertices(), &[vec![int(5), int(25)], vec![int(6), int(36)], vec![int(7), int(49)]]);
        assert_eq!(generate_cyclic_polytope(3, 2).vertices().len(), 5);
    }

    #[test]
    fn ranking_order_and_majority_rows() {
        let r = rankings(4);
        assert_eq!(r.len(), 24);
        assert_eq!(r[0], vec![0, 1, 2, 3]);
        assert_eq!(r[12], vec![2, 0, 1, 3]);
        assert_eq!(r[23], vec![3, 2, 1, 0]);
        let h = four_candidate_polytope();
        let majority = &h.rows()[4];
        let listed: Vec<usize> = (0..24).filter(|&i| !majority.normal[i].is_zero()).map(|i| i + 1).collect();
        assert_eq!(listed, vec![1, 2, 3, 4, 5, 6, 13, 14, 17, 19, 20, 23]);
        assert_eq!(h.rows().len(), 30);
    }
}
