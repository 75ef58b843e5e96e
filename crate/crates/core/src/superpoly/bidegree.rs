use std::collections::HashMap;

use itertools::Itertools;

use super::{CoordinateRing, LocalizedElement, Monomial};
use crate::sparse::{rank, Echelon, SparseVec};
use crate::superlinalg::SuperRing;
use crate::{Error, Result};

/// Default bound on `(m+n)^{2(r+s)}`.
pub const DEFAULT_SPAN_LIMIT: u128 = 1_000_000;

/// Spanning products of bidegree `(r, s)`: `r` factors `x_ij` and `s`
/// factors `x~_ij`. Supercommutativity makes ordered products redundant up
/// to sign, so one product per multiset of generators is kept.
#[derive(Clone, Debug)]
pub struct BidegreeSpan {
    pub r: usize,
    pub s: usize,
    pub products: Vec<LocalizedElement>,
}

fn check_limit(coord: &CoordinateRing, r: usize, s: usize, limit: u128) -> Result<()> {
    let t = coord.dim().total() as u128;
    let required = t.checked_pow(2 * (r + s) as u32).unwrap_or(u128::MAX);
    if required > limit {
        return Err(Error::ResourceLimit {
            what: format!("bidegree ({r},{s}) spanning set at {}", coord.dim()),
            required,
            limit,
        });
    }
    Ok(())
}

pub fn bidegree_span(
    coord: &CoordinateRing,
    r: usize,
    s: usize,
    limit: u128,
) -> Result<BidegreeSpan> {
    check_limit(coord, r, s, limit)?;
    let t = coord.dim().total();
    let ring = coord.ring();
    let gens: Vec<(usize, usize)> = (0..t).flat_map(|i| (0..t).map(move |j| (i, j))).collect();
    let product = |choice: &[&(usize, usize)], tilde: bool| {
        choice.iter().fold(ring.one(), |acc, &&(i, j)| {
            let g = if tilde {
                coord.x_tilde(i, j).clone()
            } else {
                LocalizedElement::from_poly(coord.x(i, j))
            };
            ring.mul(&acc, &g)
        })
    };
    let xs: Vec<_> = gens
        .iter()
        .combinations_with_replacement(r)
        .map(|c| product(&c, false))
        .filter(|p| !ring.is_zero(p))
        .collect();
    let tildes: Vec<_> = gens
        .iter()
        .combinations_with_replacement(s)
        .map(|c| product(&c, true))
        .filter(|p| !ring.is_zero(p))
        .collect();
    let mut products = Vec::with_capacity(xs.len() * tildes.len());
    for x in &xs {
        for y in &tildes {
            let p = ring.mul(x, y);
            if !ring.is_zero(&p) {
                products.push(p);
            }
        }
    }
    Ok(BidegreeSpan { r, s, products })
}

/// Coefficient vectors of several families over one common denominator and
/// one shared monomial index.
fn coefficient_vectors(
    coord: &CoordinateRing,
    families: &[&[LocalizedElement]],
) -> Vec<Vec<SparseVec>> {
    let ring = coord.ring();
    let all = families.iter().flat_map(|f| f.iter());
    let (a, b) = all.fold((0, 0), |(a, b), x| (a.max(x.a), b.max(x.b)));
    let mut index: HashMap<Monomial, usize> = HashMap::new();
    families
        .iter()
        .map(|family| {
            family
                .iter()
                .map(|x| {
                    let num = ring.numerator_over(x, a, b);
                    SparseVec::from_entries(num.terms().map(|(m, c)| {
                        let next = index.len();
                        (*index.entry(m.clone()).or_insert(next), c.clone())
                    }))
                })
                .collect()
        })
        .collect()
}

/// Dimension of the span of all bidegree `(r, s)` products.
pub fn bidegree_dimension(
    coord: &CoordinateRing,
    r: usize,
    s: usize,
    limit: u128,
) -> Result<usize> {
    let span = bidegree_span(coord, r, s, limit)?;
    let vecs = coefficient_vectors(coord, &[&span.products]);
    Ok(rank(vecs[0].iter()))
}

/// Whether the bidegree `(r, s)` span lies inside the `(r+1, s+1)` span.
pub fn span_inclusion(coord: &CoordinateRing, r: usize, s: usize, limit: u128) -> Result<bool> {
    let small = bidegree_span(coord, r, s, limit)?;
    let big = bidegree_span(coord, r + 1, s + 1, limit)?;
    let vecs = coefficient_vectors(coord, &[&small.products, &big.products]);
    let mut ech = Echelon::new();
    for v in &vecs[1] {
        ech.insert(v);
    }
    Ok(vecs[0].iter().all(|v| ech.contains(v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superlinalg::SuperDim;

    #[test]
    fn small_dimensions() {
        let c = CoordinateRing::new(SuperDim::new(1, 1));
        assert_eq!(bidegree_dimension(&c, 0, 0, DEFAULT_SPAN_LIMIT).unwrap(), 1);
        assert_eq!(bidegree_dimension(&c, 1, 0, DEFAULT_SPAN_LIMIT).unwrap(), 4);
        assert_eq!(bidegree_dimension(&c, 0, 1, DEFAULT_SPAN_LIMIT).unwrap(), 4);
    }

    #[test]
    fn resource_guard() {
        let c = CoordinateRing::new(SuperDim::new(2, 2));
        let err = bidegree_dimension(&c, 3, 3, DEFAULT_SPAN_LIMIT).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit { .. }));
    }

    #[test]
    fn inclusion_in_the_next_bidegree() {
        let c = CoordinateRing::new(SuperDim::new(2, 0));
        assert!(span_inclusion(&c, 0, 0, DEFAULT_SPAN_LIMIT).unwrap());
        assert!(span_inclusion(&c, 1, 0, DEFAULT_SPAN_LIMIT).unwrap());
    }
}
