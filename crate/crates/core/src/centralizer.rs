//! Exact queries on subalgebras of `M_N(Q)`: generated algebras,
//! commutants, equality of spans, the Jacobson radical and the center.
//!
//! Matrices are flattened row-major (`(p, q) -> p*N + q`) when treated as
//! vectors.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::rational::{One, Zero, Q};
use crate::sparse::{nullspace, Echelon, SparseMatrix, SparseVec};
use crate::{Error, Result};

/// Algebras up to this dimension have closure under products verified by
/// [`MatrixSubalgebra::verify_closure`] in tests and reports; larger ones
/// rely on their construction.
pub const CLOSURE_CHECK_LIMIT: usize = 400;

/// A subalgebra of `M_N(Q)` given by a linearly independent spanning set.
pub struct MatrixSubalgebra {
    n: usize,
    basis: Vec<SparseMatrix>,
    generators: Option<Vec<SparseMatrix>>,
    contains_identity: bool,
    echelon: OnceLock<Echelon>,
}

impl fmt::Debug for MatrixSubalgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MatrixSubalgebra")
            .field("n", &self.n)
            .field("dimension", &self.basis.len())
            .field("contains_identity", &self.contains_identity)
            .finish()
    }
}

impl Clone for MatrixSubalgebra {
    fn clone(&self) -> Self {
        let echelon = OnceLock::new();
        if let Some(e) = self.echelon.get() {
            let _ = echelon.set(e.clone());
        }
        Self {
            n: self.n,
            basis: self.basis.clone(),
            generators: self.generators.clone(),
            contains_identity: self.contains_identity,
            echelon,
        }
    }
}

impl MatrixSubalgebra {
    /// The unital algebra generated by `generators`: the span of all words,
    /// grown by left multiplication of each new basis element by every
    /// generator until nothing new appears.
    pub fn generated_by(
        n: usize,
        generators: Vec<SparseMatrix>,
        max_dimension: usize,
    ) -> Result<Self> {
        let mut ech = Echelon::new();
        let mut basis = Vec::new();
        let mut queue = VecDeque::new();
        let identity = SparseMatrix::identity(n);
        ech.insert(&identity.to_flat());
        basis.push(identity);
        queue.push_back(0);
        while let Some(i) = queue.pop_front() {
            let products: Vec<SparseMatrix> =
                generators.par_iter().map(|g| g.mul(&basis[i])).collect();
            for p in products {
                if ech.insert(&p.to_flat()) {
                    if basis.len() >= max_dimension {
                        return Err(Error::ResourceLimit {
                            what: "generated subalgebra dimension".into(),
                            required: basis.len() as u128 + 1,
                            limit: max_dimension as u128,
                        });
                    }
                    queue.push_back(basis.len());
                    basis.push(p);
                }
            }
        }
        let echelon = OnceLock::new();
        let _ = echelon.set(ech);
        Ok(Self {
            n,
            basis,
            generators: Some(generators),
            contains_identity: true,
            echelon,
        })
    }

    /// Span of `matrices`, reduced to an independent subset. The caller
    /// asserts closure under products; [`Self::verify_closure`] checks it.
    pub fn from_span(n: usize, matrices: impl IntoIterator<Item = SparseMatrix>) -> Self {
        let mut ech = Echelon::new();
        let basis: Vec<SparseMatrix> = matrices
            .into_iter()
            .filter(|m| ech.insert(&m.to_flat()))
            .collect();
        let contains_identity = ech.contains(&SparseMatrix::identity(n).to_flat());
        let echelon = OnceLock::new();
        let _ = echelon.set(ech);
        Self {
            n,
            basis,
            generators: None,
            contains_identity,
            echelon,
        }
    }

    /// Records a generating set; the span must equal the algebra they generate.
    pub fn with_generators(mut self, generators: Vec<SparseMatrix>) -> Self {
        self.generators = Some(generators);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SparseMatrix] {
        &self.basis
    }

    pub fn generators(&self) -> Option<&[SparseMatrix]> {
        self.generators.as_deref()
    }

    pub fn contains_identity(&self) -> bool {
        self.contains_identity
    }

    /// Generators when known, otherwise the basis.
    pub fn generating_set(&self) -> &[SparseMatrix] {
        self.generators.as_deref().unwrap_or(&self.basis)
    }

    fn echelon(&self) -> &Echelon {
        self.echelon.get_or_init(|| {
            let mut ech = Echelon::new();
            for b in &self.basis {
                ech.insert(&b.to_flat());
            }
            ech
        })
    }

    pub fn contains(&self, m: &SparseMatrix) -> bool {
        m.size() == self.n && self.echelon().contains(&m.to_flat())
    }

    /// Every product of two basis elements lies in the span.
    pub fn verify_closure(&self) -> bool {
        let ech = self.echelon();
        self.basis
            .par_iter()
            .all(|a| self.basis.iter().all(|b| ech.contains(&a.mul(b).to_flat())))
    }
}

/// `{X : XG = GX for every G}`.
pub fn commutant(n: usize, generators: &[SparseMatrix]) -> MatrixSubalgebra {
    let equations: Vec<SparseVec> = generators
        .par_iter()
        .flat_map_iter(|g| {
            let gt = g.transpose();
            (0..n * n).map(move |pq| {
                let (p, q) = (pq / n, pq % n);
                // (XG)[p][q] = sum_k X[p][k] G[k][q], (GX)[p][q] = sum_k G[p][k] X[k][q]
                let xg = gt.row(q).iter().map(|(k, v)| (p * n + k, v.clone()));
                let gx = g.row(p).iter().map(|(k, v)| (k * n + q, -v.clone()));
                SparseVec::from_entries(xg.chain(gx))
            })
        })
        .collect();
    let basis: Vec<SparseMatrix> = nullspace(n * n, equations)
        .into_iter()
        .map(|v| SparseMatrix::from_flat(n, &v))
        .collect();
    MatrixSubalgebra {
        n,
        basis,
        generators: None,
        contains_identity: true,
        echelon: OnceLock::new(),
    }
}

/// Whether `a` and `b` span the same subspace of `M_N(Q)`.
pub fn subalgebra_equal(a: &MatrixSubalgebra, b: &MatrixSubalgebra) -> bool {
    a.n == b.n && a.dimension() == b.dimension() && b.basis.par_iter().all(|m| a.contains(m))
}

/// Whether `b` is contained in `a`.
pub fn subalgebra_contains(a: &MatrixSubalgebra, b: &MatrixSubalgebra) -> bool {
    a.n == b.n && b.basis.par_iter().all(|m| a.contains(m))
}

/// Gram matrix of the trace form `(x, y) -> tr(xy)` on the basis, one
/// sparse row per basis element.
fn trace_form(a: &MatrixSubalgebra) -> Vec<SparseVec> {
    // position (p, q) -> basis elements nonzero there
    let mut at: HashMap<(usize, usize), Vec<(usize, Q)>> = HashMap::new();
    for (j, b) in a.basis.iter().enumerate() {
        for (p, q, v) in b.triplets() {
            at.entry((p, q)).or_default().push((j, v.clone()));
        }
    }
    a.basis
        .par_iter()
        .map(|b| {
            let mut row: HashMap<usize, Q> = HashMap::new();
            for (p, q, v) in b.triplets() {
                if let Some(list) = at.get(&(q, p)) {
                    for (j, w) in list {
                        *row.entry(*j).or_insert(Q::ZERO) += v * w;
                    }
                }
            }
            SparseVec::from_entries(row)
        })
        .collect()
}

fn combine(basis: &[SparseMatrix], n: usize, coeffs: &SparseVec) -> SparseMatrix {
    coeffs.iter().fold(SparseMatrix::zero(n), |acc, (i, c)| {
        acc.add_scaled(&basis[i], c)
    })
}

/// Jacobson radical as the kernel of the trace form, certified to be a
/// two-sided ideal that is nilpotent.
pub fn radical(a: &MatrixSubalgebra) -> Result<Vec<SparseMatrix>> {
    let gram = trace_form(a);
    let kernel = nullspace(a.dimension(), gram);
    let j: Vec<SparseMatrix> = kernel.iter().map(|c| combine(&a.basis, a.n, c)).collect();
    if j.is_empty() {
        return Ok(j);
    }
    let span = MatrixSubalgebra::from_span(a.n, j.clone());
    let ideal = j.par_iter().all(|x| {
        a.generating_set()
            .iter()
            .all(|g| span.contains(&g.mul(x)) && span.contains(&x.mul(g)))
    });
    if !ideal {
        return Err(Error::Verification(
            "trace-form kernel is not a two-sided ideal".into(),
        ));
    }
    // J^k = 0 for some k <= dim A + 1
    let mut power = j.clone();
    for _ in 0..=a.dimension() {
        let next = MatrixSubalgebra::from_span(
            a.n,
            power.iter().flat_map(|p| j.iter().map(move |x| p.mul(x))),
        );
        if next.dimension() == 0 {
            return Ok(j);
        }
        power = next.basis;
    }
    Err(Error::Verification(
        "trace-form kernel is not nilpotent".into(),
    ))
}

/// Basis of `{z in A : zg = gz for every generator g}`.
pub fn center(a: &MatrixSubalgebra) -> Vec<SparseMatrix> {
    let gens = a.generating_set();
    // column i of the system holds the flattened commutators [b_i, g] for all g
    let columns: Vec<Vec<(usize, Q)>> = a
        .basis
        .par_iter()
        .map(|b| {
            let nn = a.n * a.n;
            gens.iter()
                .enumerate()
                .flat_map(|(k, g)| {
                    b.mul(g)
                        .sub(&g.mul(b))
                        .to_flat()
                        .entries()
                        .iter()
                        .map(|(i, v)| (k * nn + i, v.clone()))
                        .collect::<Vec<_>>()
                })
                .collect()
        })
        .collect();
    let mut rows: HashMap<usize, Vec<(usize, Q)>> = HashMap::new();
    for (i, col) in columns.into_iter().enumerate() {
        for (r, v) in col {
            rows.entry(r).or_default().push((i, v));
        }
    }
    let equations = rows.into_values().map(SparseVec::from_entries);
    nullspace(a.dimension(), equations)
        .iter()
        .map(|c| combine(&a.basis, a.n, c))
        .collect()
}

pub fn center_dimension(a: &MatrixSubalgebra) -> usize {
    center(a).len()
}

/// One Wedderburn block of a split semisimple algebra, seen through its
/// central primitive idempotent `e`: `dimension = dim(eA)` and
/// `trace = tr(e)`, the dimension of the image of `e` in `Q^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub dimension: usize,
    pub trace: usize,
}

impl Block {
    /// Side length of the matrix block, `sqrt(dimension)`, when the block
    /// is a full matrix algebra.
    pub fn size(&self) -> Option<usize> {
        let k = (self.dimension as f64).sqrt().round() as usize;
        (k * k == self.dimension).then_some(k)
    }

    /// Multiplicity of the simple module of size `size()` in `Q^N`. For the
    /// commutant this is the dimension of the matching simple of the other
    /// side.
    pub fn multiplicity(&self) -> Option<usize> {
        let k = self.size()?;
        self.trace.is_multiple_of(k).then(|| self.trace / k)
    }
}

fn solve_dense(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let k = b.len();
    for col in 0..k {
        let piv = (col..k).find(|&r| a[r][col] != 0u32)?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = Q::ONE / &a[col][col];
        for r in 0..k {
            if r != col && a[r][col] != 0u32 {
                let f = &a[r][col] * &inv;
                for c in col..k {
                    let x = &f * &a[col][c];
                    a[r][c] -= x;
                }
                let x = &f * &b[col];
                b[r] -= x;
            }
        }
    }
    Some((0..k).map(|i| &b[i] / &a[i][i]).collect())
}

/// Characteristic polynomial coefficients `c_0..c_k` (monic, `c_k = 1`) by
/// the Faddeev-LeVerrier recursion.
fn characteristic_polynomial(m: &[Vec<Q>]) -> Vec<Q> {
    let k = m.len();
    let mul = |a: &[Vec<Q>], b: &[Vec<Q>]| -> Vec<Vec<Q>> {
        (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| (0..k).fold(Q::ZERO, |acc, l| acc + &a[i][l] * &b[l][j]))
                    .collect()
            })
            .collect()
    };
    let mut c = vec![Q::ZERO; k + 1];
    c[k] = Q::ONE;
    let mut mk: Vec<Vec<Q>> = vec![vec![Q::ZERO; k]; k];
    for i in 1..=k {
        let mut next = mul(m, &mk);
        for (d, row) in next.iter_mut().enumerate() {
            row[d] += &c[k + 1 - i];
        }
        let am = mul(m, &next);
        let tr = (0..k).fold(Q::ZERO, |acc, d| acc + &am[d][d]);
        c[k - i] = -tr / Q::from(i as u64);
        mk = next;
    }
    c
}

fn to_f64(x: &Q) -> f64 {
    use malachite_base::num::conversion::traits::RoundingFrom;
    use malachite_base::rounding_modes::RoundingMode;
    f64::rounding_from(x, RoundingMode::Nearest).0
}

/// Small-denominator rational close to `x`, by continued fractions.
fn reconstruct(x: f64) -> Option<Q> {
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    let mut y = x;
    for _ in 0..40 {
        let a = y.floor();
        if a.abs() > 1e12 {
            return None;
        }
        let a = a as i64;
        let (p2, q2) = (
            a.checked_mul(p1)?.checked_add(p0)?,
            a.checked_mul(q1)?.checked_add(q0)?,
        );
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        if (x - p1 as f64 / q1 as f64).abs() < 1e-9 * (1.0 + x.abs()) {
            return Some(Q::from_signeds(p1, q1));
        }
        let frac = y - a as f64;
        if frac.abs() < 1e-15 {
            return None;
        }
        y = 1.0 / frac;
    }
    None
}

/// Roots of a monic polynomial by Durand-Kerner iteration, real parts only.
fn approximate_roots(c: &[Q]) -> Vec<f64> {
    let k = c.len() - 1;
    let cf: Vec<f64> = c.iter().map(to_f64).collect();
    let eval = |z: (f64, f64)| {
        let mut acc = (0.0, 0.0);
        for a in cf.iter().rev() {
            acc = (acc.0 * z.0 - acc.1 * z.1 + a, acc.0 * z.1 + acc.1 * z.0);
        }
        acc
    };
    let scale = 1.0 + cf.iter().take(k).fold(0.0f64, |m, a| m.max(a.abs()));
    let mut z: Vec<(f64, f64)> = (0..k)
        .map(|i| {
            let t = 0.4 + 2.0 * std::f64::consts::PI * i as f64 / k as f64;
            (scale * t.cos(), scale * t.sin())
        })
        .collect();
    for _ in 0..2000 {
        for i in 0..k {
            let num = eval(z[i]);
            let mut den = (1.0, 0.0);
            for j in 0..k {
                if i != j {
                    let d = (z[i].0 - z[j].0, z[i].1 - z[j].1);
                    den = (den.0 * d.0 - den.1 * d.1, den.0 * d.1 + den.1 * d.0);
                }
            }
            let n2 = den.0 * den.0 + den.1 * den.1;
            if n2 == 0.0 {
                continue;
            }
            let w = (
                (num.0 * den.0 + num.1 * den.1) / n2,
                (num.1 * den.0 - num.0 * den.1) / n2,
            );
            z[i] = (z[i].0 - w.0, z[i].1 - w.1);
        }
    }
    z.into_iter().map(|(re, _)| re).collect()
}

/// Central primitive idempotents of a split semisimple algebra, or `None`
/// when the center does not split over the rationals into distinct
/// eigenvalues for any of the trial elements.
pub fn central_idempotents(a: &MatrixSubalgebra) -> Option<Vec<SparseMatrix>> {
    let z = center(a);
    let k = z.len();
    let n = a.n;
    if k == 0 {
        return None;
    }
    if k == 1 {
        return a.contains_identity.then(|| vec![SparseMatrix::identity(n)]);
    }
    // coordinates in the center from k positions where the basis is independent
    let flat: Vec<SparseVec> = z.iter().map(SparseMatrix::to_flat).collect();
    let mut ech = Echelon::new();
    for v in &flat {
        ech.insert(v);
    }
    let positions: Vec<usize> = ech.pivots().collect();
    let minor: Vec<Vec<Q>> = positions
        .iter()
        .map(|&p| {
            flat.iter()
                .map(|v| v.get(p).cloned().unwrap_or(Q::ZERO))
                .collect()
        })
        .collect();
    let coords = |m: &SparseMatrix| {
        let v = m.to_flat();
        let rhs = positions
            .iter()
            .map(|&p| v.get(p).cloned().unwrap_or(Q::ZERO))
            .collect();
        solve_dense(minor.clone(), rhs)
    };
    let trials: Vec<Vec<i64>> = vec![
        (1..=k as i64).collect(),
        (0..k as u32).map(|i| 3i64.pow(i)).collect(),
        (0..k as i64)
            .map(|i| if i % 2 == 0 { i + 1 } else { -(i + 2) })
            .collect(),
    ];
    for w in trials {
        let y = z
            .iter()
            .zip(&w)
            .fold(SparseMatrix::zero(n), |acc, (b, &c)| {
                acc.add_scaled(b, &Q::from(c))
            });
        let mut mat = vec![vec![Q::ZERO; k]; k];
        for (j, b) in z.iter().enumerate() {
            let c = coords(&y.mul(b))?;
            for (i, x) in c.into_iter().enumerate() {
                mat[i][j] = x;
            }
        }
        let poly = characteristic_polynomial(&mat);
        let mut roots: Vec<Q> = approximate_roots(&poly)
            .into_iter()
            .filter_map(reconstruct)
            .filter(|l| poly.iter().rev().fold(Q::ZERO, |acc, c| acc * l + c) == 0u32)
            .collect();
        roots.sort();
        roots.dedup();
        if roots.len() != k {
            continue;
        }
        let idempotents: Vec<SparseMatrix> = (0..k)
            .map(|j| {
                roots.iter().enumerate().filter(|&(l, _)| l != j).fold(
                    SparseMatrix::identity(n),
                    |acc, (_, lam)| {
                        let shifted = y.sub(&SparseMatrix::identity(n).scaled(lam));
                        acc.mul(&shifted).scaled(&(Q::ONE / (&roots[j] - lam)))
                    },
                )
            })
            .collect();
        let ok = idempotents
            .iter()
            .all(|e| e.mul(e) == *e && a.generating_set().iter().all(|g| g.commutes_with(e)));
        if ok {
            return Some(idempotents);
        }
    }
    None
}

/// Blocks of a split semisimple algebra, one per central primitive
/// idempotent.
pub fn block_structure(a: &MatrixSubalgebra) -> Option<Vec<Block>> {
    let idempotents = central_idempotents(a)?;
    let mut blocks: Vec<Block> = idempotents
        .iter()
        .map(|e| {
            let span = MatrixSubalgebra::from_span(a.n, a.basis.iter().map(|b| e.mul(b)));
            let trace = e.trace();
            Block {
                dimension: span.dimension(),
                trace: usize::try_from(&trace).unwrap_or(0),
            }
        })
        .collect();
    blocks.sort_by_key(|b| std::cmp::Reverse((b.dimension, b.trace)));
    Some(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn unit(n: usize, i: usize, j: usize) -> SparseMatrix {
        SparseMatrix::from_triplets(n, [(i, j, q(1))])
    }

    #[test]
    fn commutant_of_identity_is_everything() {
        let c = commutant(3, &[SparseMatrix::identity(3)]);
        assert_eq!(c.dimension(), 9);
        assert_eq!(center_dimension(&c), 1);
        assert!(radical(&c).unwrap().is_empty());
    }

    #[test]
    fn diagonal_algebra() {
        let d = SparseMatrix::from_triplets(3, [(0, 0, q(1)), (1, 1, q(2)), (2, 2, q(2))]);
        let a = MatrixSubalgebra::generated_by(3, vec![d.clone()], 10).unwrap();
        assert_eq!(a.dimension(), 2);
        assert!(a.verify_closure());
        let c = commutant(3, &[d]);
        assert_eq!(c.dimension(), 5);
        assert_eq!(center_dimension(&c), 2);
        assert!(subalgebra_contains(&commutant(3, c.basis()), &a));
    }

    #[test]
    fn upper_triangular_radical() {
        let gens = vec![unit(2, 0, 0), unit(2, 0, 1)];
        let a = MatrixSubalgebra::generated_by(2, gens, 10).unwrap();
        assert_eq!(a.dimension(), 3);
        let j = radical(&a).unwrap();
        assert_eq!(j.len(), 1);
        assert!(j[0].get(0, 1) != 0u32);
        assert_eq!(j[0].get(0, 0), q(0));
    }

    #[test]
    fn equality_of_spans() {
        let full = commutant(2, &[]);
        let gen =
            MatrixSubalgebra::generated_by(2, vec![unit(2, 0, 1), unit(2, 1, 0)], 10).unwrap();
        assert!(subalgebra_equal(&full, &gen));
        let scalars = MatrixSubalgebra::generated_by(2, vec![], 10).unwrap();
        assert_eq!(scalars.dimension(), 1);
        assert!(!subalgebra_equal(&full, &scalars));
    }

    #[test]
    fn blocks_of_a_commutant() {
        // diag(1, 2, 2) has commutant Q + M_2(Q)
        let d = SparseMatrix::from_triplets(3, [(0, 0, q(1)), (1, 1, q(2)), (2, 2, q(2))]);
        let c = commutant(3, &[d]);
        let blocks = block_structure(&c).unwrap();
        assert_eq!(
            blocks,
            vec![
                Block {
                    dimension: 4,
                    trace: 2
                },
                Block {
                    dimension: 1,
                    trace: 1
                }
            ]
        );
    }

    #[test]
    fn characteristic_polynomial_and_roots() {
        // [[2, 1], [0, 3]] has roots 2 and 3
        let m = vec![vec![q(2), q(1)], vec![q(0), q(3)]];
        let c = characteristic_polynomial(&m);
        assert_eq!(c, vec![q(6), q(-5), q(1)]);
        let mut roots: Vec<Q> = approximate_roots(&c)
            .into_iter()
            .filter_map(reconstruct)
            .collect();
        roots.sort();
        assert_eq!(roots, vec![q(2), q(3)]);
        assert_eq!(reconstruct(-0.75), Some(crate::rational::frac(-3, 4)));
    }

    #[test]
    fn dimension_guard() {
        let err =
            MatrixSubalgebra::generated_by(3, vec![unit(3, 0, 1), unit(3, 1, 0), unit(3, 1, 2)], 4);
        assert!(matches!(err, Err(Error::ResourceLimit { .. })));
    }
}
