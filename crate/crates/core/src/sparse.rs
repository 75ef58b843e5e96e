//! Sparse exact linear algebra over the rationals.
//!
//! The workloads here (commutants of 125x125 matrix sets, spans of a few
//! thousand matrices) are far too large for dense elimination but extremely
//! sparse and block-decoupled, so everything is built on sorted sparse
//! vectors and an incremental row-echelon form whose pivots are the leading
//! column of each row.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::rational::{One, Zero, Q};

/// A sparse vector of rationals: strictly increasing indices, no stored zeros.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, Q)>,
}

impl fmt::Debug for SparseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.entries.iter().map(|(i, v)| (i, v.to_string())))
            .finish()
    }
}

impl SparseVec {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a vector from arbitrary `(index, value)` pairs; duplicates are
    /// summed and zeros dropped.
    pub fn from_entries(entries: impl IntoIterator<Item = (usize, Q)>) -> Self {
        let mut map: BTreeMap<usize, Q> = BTreeMap::new();
        for (i, v) in entries {
            *map.entry(i).or_insert(Q::ZERO) += v;
        }
        Self {
            entries: map.into_iter().filter(|(_, v)| *v != 0u32).collect(),
        }
    }

    /// Caller guarantees sorted, distinct indices and nonzero values.
    pub(crate) fn from_sorted(entries: Vec<(usize, Q)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|(_, v)| *v != 0u32));
        Self { entries }
    }

    pub fn unit(index: usize) -> Self {
        Self {
            entries: vec![(index, Q::ONE)],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Q)> + '_ {
        self.entries.iter().map(|(i, v)| (*i, v))
    }

    pub fn entries(&self) -> &[(usize, Q)] {
        &self.entries
    }

    pub fn get(&self, index: usize) -> Option<&Q> {
        self.entries
            .binary_search_by_key(&index, |(i, _)| *i)
            .ok()
            .map(|k| &self.entries[k].1)
    }

    pub fn leading(&self) -> Option<(usize, &Q)> {
        self.entries.first().map(|(i, v)| (*i, v))
    }

    pub fn scaled(&self, c: &Q) -> Self {
        if *c == 0u32 {
            return Self::new();
        }
        Self {
            entries: self.entries.iter().map(|(i, v)| (*i, v * c)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            entries: self.entries.iter().map(|(i, v)| (*i, -v)).collect(),
        }
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, other: &Self, c: &Q) -> Self {
        if *c == 0u32 {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (
            self.entries.iter().peekable(),
            other.entries.iter().peekable(),
        );
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        out.push((*j, y * c));
                        b.next();
                    } else {
                        let s = x + y * c;
                        if s != 0u32 {
                            out.push((*i, s));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    out.push((*j, y * c));
                    b.next();
                }
                (None, None) => break,
            }
        }
        Self { entries: out }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(other, &Q::ONE)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(other, &-Q::ONE)
    }

    pub fn dot(&self, other: &Self) -> Q {
        let mut acc = Q::ZERO;
        let (mut a, mut b) = (0, 0);
        while a < self.entries.len() && b < other.entries.len() {
            let (i, j) = (self.entries[a].0, other.entries[b].0);
            if i < j {
                a += 1;
            } else if j < i {
                b += 1;
            } else {
                acc += &self.entries[a].1 * &other.entries[b].1;
                a += 1;
                b += 1;
            }
        }
        acc
    }

    /// Re-indexes every entry through `f`, which must be injective.
    pub fn map_indices(&self, f: impl Fn(usize) -> usize) -> Self {
        Self::from_entries(self.entries.iter().map(|(i, v)| (f(*i), v.clone())))
    }
}

/// Row-echelon form built incrementally. Every stored row has leading
/// coefficient one, and no two rows share a leading column.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<SparseVec>,
    pivot_row: HashMap<usize, usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows
            .iter()
            .map(|r| r.leading().expect("nonzero row").0)
    }

    /// Remainder of `v` after eliminating every pivot column. The result has
    /// no entries in pivot columns; it is zero iff `v` lies in the row span.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        if self.rows.is_empty() || v.is_zero() {
            return v.clone();
        }
        if !v.iter().any(|(i, _)| self.pivot_row.contains_key(&i)) {
            return v.clone();
        }
        let mut work: BTreeMap<usize, Q> = v.iter().map(|(i, x)| (i, x.clone())).collect();
        let mut out = Vec::new();
        while let Some((col, coeff)) = work.pop_first() {
            match self.pivot_row.get(&col) {
                Some(&r) => {
                    for (j, x) in self.rows[r].iter().skip(1) {
                        let slot = work.entry(j).or_insert(Q::ZERO);
                        *slot -= &coeff * x;
                        if *slot == 0u32 {
                            work.remove(&j);
                        }
                    }
                }
                None => out.push((col, coeff)),
            }
        }
        SparseVec::from_sorted(out)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Inserts `v`; returns whether it was independent of the current rows.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let r = self.reduce(v);
        self.push_reduced(r)
    }

    /// Inserts a vector already reduced by [`Echelon::reduce`].
    pub fn push_reduced(&mut self, r: SparseVec) -> bool {
        let Some((lead, c)) = r.leading() else {
            return false;
        };
        debug_assert!(!self.pivot_row.contains_key(&lead));
        let row = if *c == 1u32 {
            r
        } else {
            let inv = Q::ONE / c;
            r.scaled(&inv)
        };
        self.pivot_row.insert(lead, self.rows.len());
        self.rows.push(row);
        true
    }

    /// Reduced row-echelon form: each row is zero at every other pivot.
    pub fn into_rref(self) -> Rref {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| std::cmp::Reverse(self.rows[r].leading().unwrap().0));
        let mut done: HashMap<usize, SparseVec> = HashMap::with_capacity(self.rows.len());
        for r in order {
            let row = &self.rows[r];
            let lead = row.leading().unwrap().0;
            let mut acc = row.clone();
            for (j, x) in row.iter().skip(1) {
                if let Some(other) = done.get(&j) {
                    acc = acc.add_scaled(other, &-x.clone());
                }
            }
            done.insert(lead, acc);
        }
        let mut rows: Vec<(usize, SparseVec)> = done.into_iter().collect();
        rows.sort_by_key(|(p, _)| *p);
        Rref { rows }
    }
}

/// Reduced row-echelon form, rows sorted by pivot column.
#[derive(Clone, Debug)]
pub struct Rref {
    rows: Vec<(usize, SparseVec)>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = (usize, &SparseVec)> {
        self.rows.iter().map(|(p, r)| (*p, r))
    }

    /// Basis of `{x : row . x = 0 for every row}` in `dim` unknowns, one
    /// vector per free column in increasing column order.
    pub fn nullspace(&self, dim: usize) -> Vec<SparseVec> {
        let mut is_pivot = vec![false; dim];
        for (p, _) in &self.rows {
            is_pivot[*p] = true;
        }
        let mut cols: HashMap<usize, Vec<(usize, Q)>> = HashMap::new();
        for (p, row) in &self.rows {
            for (j, x) in row.iter().skip(1) {
                debug_assert!(!is_pivot[j]);
                cols.entry(j).or_default().push((*p, -x.clone()));
            }
        }
        (0..dim)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut entries = cols.remove(&f).unwrap_or_default();
                entries.push((f, Q::ONE));
                entries.sort_by_key(|(i, _)| *i);
                SparseVec::from_sorted(entries)
            })
            .collect()
    }
}

/// Nullspace of the homogeneous system given by `equations` in `dim`
/// unknowns. Sparse equations are eliminated first, which keeps fill-in low
/// for the singleton-heavy commutant systems.
pub fn nullspace(dim: usize, equations: impl IntoIterator<Item = SparseVec>) -> Vec<SparseVec> {
    let mut eqs: Vec<SparseVec> = equations.into_iter().filter(|e| !e.is_zero()).collect();
    eqs.sort_by_key(|e| e.nnz());
    let mut ech = Echelon::new();
    for e in &eqs {
        ech.insert(e);
        if ech.rank() == dim {
            break;
        }
    }
    ech.into_rref().nullspace(dim)
}

/// Rank of a set of vectors.
pub fn rank<'a>(vectors: impl IntoIterator<Item = &'a SparseVec>) -> usize {
    let mut ech = Echelon::new();
    for v in vectors {
        ech.insert(v);
    }
    ech.rank()
}

/// A square sparse matrix over the rationals stored by rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SparseMatrix {
    n: usize,
    rows: Vec<SparseVec>,
}

impl fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SparseMatrix({}x{})", self.n, self.n)?;
        for (i, row) in self.rows.iter().enumerate() {
            if !row.is_zero() {
                writeln!(f, "  {i}: {row:?}")?;
            }
        }
        Ok(())
    }
}

impl SparseMatrix {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            rows: vec![SparseVec::new(); n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            rows: (0..n).map(SparseVec::unit).collect(),
        }
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(n: usize, triplets: impl IntoIterator<Item = (usize, usize, Q)>) -> Self {
        let mut buckets: Vec<Vec<(usize, Q)>> = vec![Vec::new(); n];
        for (r, c, v) in triplets {
            assert!(r < n && c < n, "entry ({r},{c}) outside {n}x{n}");
            buckets[r].push((c, v));
        }
        Self {
            n,
            rows: buckets.into_iter().map(SparseVec::from_entries).collect(),
        }
    }

    pub fn from_rows(rows: Vec<SparseVec>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.iter().all(|(c, _)| c < n)));
        Self { n, rows }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn row(&self, r: usize) -> &SparseVec {
        &self.rows[r]
    }

    pub fn get(&self, r: usize, c: usize) -> Q {
        self.rows[r].get(c).cloned().unwrap_or(Q::ZERO)
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(SparseVec::nnz).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(SparseVec::is_zero)
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Q)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, c, v)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut scratch: Vec<Q> = vec![Q::ZERO; n];
        let mut touched: Vec<usize> = Vec::new();
        let mut mark = vec![false; n];
        let rows = self
            .rows
            .iter()
            .map(|row| {
                for (k, a) in row.iter() {
                    for (j, b) in other.rows[k].iter() {
                        if !mark[j] {
                            mark[j] = true;
                            touched.push(j);
                        }
                        scratch[j] += a * b;
                    }
                }
                touched.sort_unstable();
                let mut out = Vec::with_capacity(touched.len());
                for &j in &touched {
                    mark[j] = false;
                    let v = std::mem::replace(&mut scratch[j], Q::ZERO);
                    if v != 0u32 {
                        out.push((j, v));
                    }
                }
                touched.clear();
                SparseVec::from_sorted(out)
            })
            .collect();
        Self { n, rows }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(other, &Q::ONE)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(other, &-Q::ONE)
    }

    pub fn add_scaled(&self, other: &Self, c: &Q) -> Self {
        assert_eq!(self.n, other.n);
        Self {
            n: self.n,
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a.add_scaled(b, c))
                .collect(),
        }
    }

    pub fn scaled(&self, c: &Q) -> Self {
        Self {
            n: self.n,
            rows: self.rows.iter().map(|r| r.scaled(c)).collect(),
        }
    }

    /// `AB - sign * BA`.
    pub fn supercommutator(&self, other: &Self, sign: &Q) -> Self {
        self.mul(other).add_scaled(&other.mul(self), &-sign.clone())
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.mul(other) == other.mul(self)
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(self.n, self.triplets().map(|(r, c, v)| (c, r, v.clone())))
    }

    pub fn trace(&self) -> Q {
        let mut acc = Q::ZERO;
        for (r, row) in self.rows.iter().enumerate() {
            if let Some(v) = row.get(r) {
                acc += v;
            }
        }
        acc
    }

    /// Row-major flattening into a vector of length `n * n`.
    pub fn to_flat(&self) -> SparseVec {
        let n = self.n;
        let mut out = Vec::with_capacity(self.nnz());
        for (r, row) in self.rows.iter().enumerate() {
            out.extend(row.iter().map(|(c, v)| (r * n + c, v.clone())));
        }
        SparseVec::from_sorted(out)
    }

    pub fn from_flat(n: usize, v: &SparseVec) -> Self {
        Self::from_triplets(n, v.iter().map(|(i, x)| (i / n, i % n, x.clone())))
    }

    /// Rank of the matrix.
    pub fn rank(&self) -> usize {
        rank(self.rows.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, q};

    fn v(entries: &[(usize, i64)]) -> SparseVec {
        SparseVec::from_entries(entries.iter().map(|&(i, x)| (i, q(x))))
    }

    #[test]
    fn add_scaled_cancels() {
        let a = v(&[(0, 1), (2, 3)]);
        let b = v(&[(2, 1), (5, 4)]);
        let c = a.add_scaled(&b, &q(-3));
        assert_eq!(c, v(&[(0, 1), (5, -12)]));
        assert_eq!(a.dot(&b), q(3));
    }

    #[test]
    fn echelon_rank_and_membership() {
        let mut e = Echelon::new();
        assert!(e.insert(&v(&[(0, 2), (1, 4)])));
        assert!(e.insert(&v(&[(1, 1), (2, 1)])));
        assert!(!e.insert(&v(&[(0, 1), (1, 3), (2, 1)])));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&v(&[(0, 1), (2, -2)])));
        assert!(!e.contains(&v(&[(2, 1)])));
    }

    #[test]
    fn nullspace_of_small_system() {
        // x0 + x1 = 0, x1 - x2 = 0 in four unknowns
        let ns = nullspace(4, vec![v(&[(0, 1), (1, 1)]), v(&[(1, 1), (2, -1)])]);
        assert_eq!(ns.len(), 2);
        assert_eq!(ns[0], v(&[(0, -1), (1, 1), (2, 1)]));
        assert_eq!(ns[1], v(&[(3, 1)]));
    }

    #[test]
    fn rref_clears_other_pivots() {
        let mut e = Echelon::new();
        e.insert(&v(&[(0, 1), (1, 1), (2, 1)]));
        e.insert(&v(&[(1, 1), (2, 2)]));
        let rref = e.into_rref();
        let rows: Vec<_> = rref.rows().map(|(p, r)| (p, r.clone())).collect();
        assert_eq!(rows[0], (0, v(&[(0, 1), (2, -1)])));
        assert_eq!(rows[1], (1, v(&[(1, 1), (2, 2)])));
    }

    #[test]
    fn matrix_product_and_trace() {
        let a = SparseMatrix::from_triplets(2, [(0, 1, q(1)), (1, 0, q(1))]);
        let b = SparseMatrix::from_triplets(2, [(0, 0, frac(1, 2)), (1, 1, q(3))]);
        let ab = a.mul(&b);
        assert_eq!(
            ab,
            SparseMatrix::from_triplets(2, [(0, 1, q(3)), (1, 0, frac(1, 2))])
        );
        assert_eq!(a.mul(&a), SparseMatrix::identity(2));
        assert_eq!(b.trace(), frac(7, 2));
        assert_eq!(SparseMatrix::from_flat(2, &ab.to_flat()), ab);
        assert!(!a.commutes_with(&b));
        assert_eq!(ab.rank(), 2);
    }
}
