//! Double description: extreme rays of a pointed cone `{y : A y >= 0}`.
//!
//! Constraints are added one at a time to an initial simplicial cone spanned
//! by a row basis. Adjacency of two rays is decided combinatorially from the
//! sets of processed constraints they make tight.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, Sign};

use crate::linalg::{dot, inverse_columns, primitive, EchelonBasis};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Bitset(Vec<u64>);

impl Bitset {
    fn new(len: usize) -> Self {
        Self(vec![0; len.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn intersection(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_subset(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

/// The row space of `A` does not span the ambient space, so the cone
/// contains a line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct NotPointed {
    pub rank: usize,
}

#[derive(Clone, Debug)]
pub(crate) struct Ray {
    pub vector: Vec<BigInt>,
    /// Rows of `A` on which the ray is tight.
    pub zeros: Bitset,
}

/// Extreme rays of `{y in R^n : row . y >= 0 for every row}`.
///
/// Every row must have length `n`. Returns an empty list when the cone is
/// `{0}`.
pub(crate) fn extreme_rays(rows: &[Vec<BigInt>], n: usize) -> Result<Vec<Ray>, NotPointed> {
    let mut basis = EchelonBasis::new();
    let mut basis_rows = Vec::with_capacity(n);
    let mut rest = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        if basis.rank() < n && basis.insert(row) {
            basis_rows.push(i);
        } else {
            rest.push(i);
        }
    }
    if basis.rank() < n {
        return Err(NotPointed { rank: basis.rank() });
    }

    let b: Vec<Vec<BigInt>> = basis_rows.iter().map(|&i| rows[i].clone()).collect();
    let columns = inverse_columns(&b).expect("basis rows are independent");
    let mut rays: Vec<Ray> = columns
        .into_iter()
        .enumerate()
        .map(|(j, vector)| {
            let mut zeros = Bitset::new(rows.len());
            for (k, &r) in basis_rows.iter().enumerate() {
                if k != j {
                    zeros.set(r);
                }
            }
            Ray { vector, zeros }
        })
        .collect();

    for &r in &rest {
        let row = &rows[r];
        let values: Vec<BigInt> = rays.iter().map(|ray| dot(row, &ray.vector)).collect();
        let positive: Vec<usize> = (0..rays.len())
            .filter(|&i| values[i].sign() == Sign::Plus)
            .collect();
        let negative: Vec<usize> = (0..rays.len())
            .filter(|&i| values[i].sign() == Sign::Minus)
            .collect();

        let mut created = Vec::new();
        if !negative.is_empty() {
            for &p in &positive {
                for &q in &negative {
                    let common = rays[p].zeros.intersection(&rays[q].zeros);
                    if common.count() + 2 < n {
                        continue;
                    }
                    let adjacent = (0..rays.len())
                        .filter(|&k| k != p && k != q)
                        .all(|k| !common.is_subset(&rays[k].zeros));
                    if !adjacent {
                        continue;
                    }
                    let vector: Vec<BigInt> = rays[q]
                        .vector
                        .iter()
                        .zip(&rays[p].vector)
                        .map(|(vq, vp)| &values[p] * vq - &values[q] * vp)
                        .collect();
                    let mut zeros = common;
                    zeros.set(r);
                    created.push(Ray {
                        vector: primitive(vector),
                        zeros,
                    });
                }
            }
        }

        let mut next = Vec::with_capacity(positive.len() + created.len() + rays.len());
        for (i, mut ray) in rays.into_iter().enumerate() {
            match values[i].sign() {
                Sign::Minus => {}
                Sign::NoSign => {
                    ray.zeros.set(r);
                    next.push(ray);
                }
                Sign::Plus => next.push(ray),
            }
        }
        next.extend(created);
        rays = next;
    }
    Ok(rays)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    fn ray_set(rays: &[Ray]) -> BTreeSet<Vec<BigInt>> {
        rays.iter().map(|r| r.vector.clone()).collect()
    }

    #[test]
    fn quadrant_and_square_pyramid() {
        let q = extreme_rays(&ints(&[&[1, 0], &[0, 1]]), 2).unwrap();
        assert_eq!(ray_set(&q), ints(&[&[1, 0], &[0, 1]]).into_iter().collect());

        // cone over a square: z >= |x|, z >= |y|
        let rows = ints(&[&[1, 0, 1], &[-1, 0, 1], &[0, 1, 1], &[0, -1, 1]]);
        let rays = extreme_rays(&rows, 3).unwrap();
        let expected = ints(&[&[1, 1, 1], &[1, -1, 1], &[-1, 1, 1], &[-1, -1, 1]]);
        assert_eq!(ray_set(&rays), expected.into_iter().collect());
    }

    #[test]
    fn redundant_rows_and_trivial_cone() {
        let rows = ints(&[&[1, 0], &[0, 1], &[1, 1], &[2, 1]]);
        assert_eq!(extreme_rays(&rows, 2).unwrap().len(), 2);
        let rows = ints(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]);
        assert!(extreme_rays(&rows, 2).unwrap().is_empty());
        assert_eq!(
            extreme_rays(&ints(&[&[1, 0]]), 2).unwrap_err(),
            NotPointed { rank: 1 }
        );
    }
}
