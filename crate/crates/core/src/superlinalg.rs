//! Z/2-graded index bookkeeping, Koszul signs and supermatrices.
//!
//! Supermatrices are generic over a [`SuperRing`]: a ring object that knows
//! how to add, multiply, test parity and (partially) invert its elements.
//! The coordinate ring and its localization in [`crate::superpoly`] and the
//! plain rationals all implement it.

use std::collections::HashMap;
use std::fmt;
use std::ops::Add;

use crate::rational::{One, Zero, Q};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(bit: usize) -> Self {
        if bit.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// `(-1)^{|self||other|}` as an exponent bit.
    pub fn koszul(self, other: Parity) -> usize {
        self.bit() * other.bit()
    }
}

impl Add for Parity {
    type Output = Parity;

    fn add(self, rhs: Parity) -> Parity {
        Parity::from_bit(self.bit() + rhs.bit())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bit())
    }
}

/// Super-dimension `(m|n)`: indices `0..m` are even, `m..m+n` odd.
///
/// Indices are zero-based throughout the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SuperDim {
    pub m: usize,
    pub n: usize,
}

impl SuperDim {
    pub const fn new(m: usize, n: usize) -> Self {
        Self { m, n }
    }

    pub const fn total(self) -> usize {
        self.m + self.n
    }

    pub fn parity(self, i: usize) -> Parity {
        debug_assert!(i < self.total());
        if i < self.m {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn flipped(self) -> Self {
        Self::new(self.n, self.m)
    }
}

impl fmt::Display for SuperDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}|{})", self.m, self.n)
    }
}

/// Parities of an ordered list of tensor factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulContext {
    parities: Vec<Parity>,
}

impl KoszulContext {
    pub fn new(parities: Vec<Parity>) -> Self {
        Self { parities }
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }

    pub fn total_parity(&self) -> Parity {
        self.parities.iter().fold(Parity::Even, |acc, &p| acc + p)
    }

    /// Parity of the factors strictly before position `k`.
    pub fn parity_before(&self, k: usize) -> Parity {
        self.parities[..k]
            .iter()
            .fold(Parity::Even, |acc, &p| acc + p)
    }

    /// Sign exponent for transposing factors `k` and `k + 1`.
    pub fn swap_exponent(&self, k: usize) -> usize {
        self.parities[k].koszul(self.parities[k + 1])
    }

    /// Sign exponent for reordering the factors so that the factor at
    /// position `i` ends at position `target[i]`: one Koszul sign per pair
    /// of odd factors whose relative order changes.
    pub fn permutation_exponent(&self, target: &[usize]) -> usize {
        assert_eq!(target.len(), self.parities.len());
        let mut e = 0;
        for i in 0..target.len() {
            for j in i + 1..target.len() {
                if target[i] > target[j] {
                    e += self.parities[i].koszul(self.parities[j]);
                }
            }
        }
        e % 2
    }
}

/// A supercommutative ring with an inversion oracle.
pub trait SuperRing {
    type Elem: Clone + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_rational(&self, c: &Q) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Parity of a homogeneous element; `None` for mixed elements. Zero is
    /// reported as even.
    fn parity(&self, a: &Self::Elem) -> Option<Parity>;

    /// Multiplicative inverse when the element is a unit the ring can
    /// certify; `None` otherwise. Implementations never guess.
    fn try_invert(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.is_zero(&self.sub(a, b))
    }

    /// Whether `a` is homogeneous of parity `p` (zero has every parity).
    fn has_parity(&self, a: &Self::Elem, p: Parity) -> bool {
        self.is_zero(a) || self.parity(a) == Some(p)
    }
}

/// The rationals as a purely even superring.
#[derive(Clone, Copy, Debug, Default)]
pub struct Rationals;

impl SuperRing for Rationals {
    type Elem = Q;

    fn zero(&self) -> Q {
        Q::ZERO
    }
    fn one(&self) -> Q {
        Q::ONE
    }
    fn from_rational(&self, c: &Q) -> Q {
        c.clone()
    }
    fn add(&self, a: &Q, b: &Q) -> Q {
        a + b
    }
    fn neg(&self, a: &Q) -> Q {
        -a
    }
    fn mul(&self, a: &Q, b: &Q) -> Q {
        a * b
    }
    fn is_zero(&self, a: &Q) -> bool {
        *a == 0u32
    }
    fn parity(&self, _a: &Q) -> Option<Parity> {
        Some(Parity::Even)
    }
    fn try_invert(&self, a: &Q) -> Option<Q> {
        (*a != 0u32).then(|| Q::ONE / a)
    }
}

/// A rectangular block of ring elements, stored by rows.
pub type Block<E> = Vec<Vec<E>>;

/// Square supermatrix with rows and columns graded by `dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperMatrix<E> {
    dim: SuperDim,
    entries: Vec<E>,
}

impl<E: Clone> SuperMatrix<E> {
    pub fn from_fn(dim: SuperDim, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let t = dim.total();
        let mut entries = Vec::with_capacity(t * t);
        for i in 0..t {
            for j in 0..t {
                entries.push(f(i, j));
            }
        }
        Self { dim, entries }
    }

    pub fn from_rows(dim: SuperDim, rows: Vec<Vec<E>>) -> Result<Self> {
        let t = dim.total();
        if rows.len() != t {
            return Err(Error::DimensionMismatch {
                expected: t,
                actual: rows.len(),
            });
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != t) {
            return Err(Error::NotSquare {
                rows: t,
                cols: bad.len(),
            });
        }
        Ok(Self {
            dim,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_blocks(
        dim: SuperDim,
        t1: &Block<E>,
        t2: &Block<E>,
        t3: &Block<E>,
        t4: &Block<E>,
    ) -> Self {
        let m = dim.m;
        Self::from_fn(dim, |i, j| match (i < m, j < m) {
            (true, true) => t1[i][j].clone(),
            (true, false) => t2[i][j - m].clone(),
            (false, true) => t3[i - m][j].clone(),
            (false, false) => t4[i - m][j - m].clone(),
        })
    }

    pub fn dim(&self) -> SuperDim {
        self.dim
    }

    pub fn size(&self) -> usize {
        self.dim.total()
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.entries[i * self.size() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        let t = self.size();
        self.entries[i * t + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<E>> {
        self.entries
            .chunks(self.size())
            .map(<[E]>::to_vec)
            .collect()
    }

    pub fn map<F: Clone>(&self, f: impl FnMut(&E) -> F) -> SuperMatrix<F> {
        SuperMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    fn sub_block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Block<E> {
        rows.map(|i| cols.clone().map(|j| self.get(i, j).clone()).collect())
            .collect()
    }

    /// The four blocks `(T1, T2, T3, T4)`.
    pub fn blocks(&self) -> (Block<E>, Block<E>, Block<E>, Block<E>) {
        let (m, t) = (self.dim.m, self.size());
        (
            self.sub_block(0..m, 0..m),
            self.sub_block(0..m, m..t),
            self.sub_block(m..t, 0..m),
            self.sub_block(m..t, m..t),
        )
    }
}

pub fn identity<R: SuperRing>(ring: &R, dim: SuperDim) -> SuperMatrix<R::Elem> {
    SuperMatrix::from_fn(dim, |i, j| if i == j { ring.one() } else { ring.zero() })
}

pub fn mat_mul<R: SuperRing>(
    ring: &R,
    a: &SuperMatrix<R::Elem>,
    b: &SuperMatrix<R::Elem>,
) -> SuperMatrix<R::Elem> {
    assert_eq!(a.dim, b.dim, "supermatrix gradings differ");
    let t = a.size();
    SuperMatrix::from_fn(a.dim, |i, j| {
        (0..t).fold(ring.zero(), |acc, k| {
            ring.add(&acc, &ring.mul(a.get(i, k), b.get(k, j)))
        })
    })
}

pub fn mat_equal<R: SuperRing>(
    ring: &R,
    a: &SuperMatrix<R::Elem>,
    b: &SuperMatrix<R::Elem>,
) -> bool {
    a.dim == b.dim
        && a.entries
            .iter()
            .zip(&b.entries)
            .all(|(x, y)| ring.equal(x, y))
}

/// Even supermatrix: diagonal blocks even, off-diagonal blocks odd.
pub fn is_even<R: SuperRing>(ring: &R, a: &SuperMatrix<R::Elem>) -> bool {
    let t = a.size();
    (0..t).all(|i| (0..t).all(|j| ring.has_parity(a.get(i, j), a.dim.parity(i) + a.dim.parity(j))))
}

/// `[[T1^t, T3^t], [-T2^t, T4^t]]`.
pub fn supertranspose<R: SuperRing>(ring: &R, a: &SuperMatrix<R::Elem>) -> SuperMatrix<R::Elem> {
    let dim = a.dim;
    SuperMatrix::from_fn(dim, |i, j| {
        let v = a.get(j, i);
        // new (odd row, even column) entries come from T2 with a sign
        if dim.parity(i).is_odd() && !dim.parity(j).is_odd() {
            ring.neg(v)
        } else {
            v.clone()
        }
    })
}

/// `[[T4, T3], [T2, T1]]` over the flipped grading `(n|m)`.
pub fn parity_flip<E: Clone>(a: &SuperMatrix<E>) -> SuperMatrix<E> {
    let (m, n) = (a.dim.m, a.dim.n);
    let t = m + n;
    // new index k corresponds to old index (k + m) mod t
    let old = |k: usize| (k + m) % t.max(1);
    SuperMatrix::from_fn(a.dim.flipped(), |i, j| a.get(old(i), old(j)).clone())
}

fn block_mul<R: SuperRing>(
    ring: &R,
    a: &Block<R::Elem>,
    b: &Block<R::Elem>,
    inner: usize,
) -> Block<R::Elem> {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(ring.zero(), |acc, k| {
                        ring.add(&acc, &ring.mul(&row[k], &b[k][j]))
                    })
                })
                .collect()
        })
        .collect()
}

fn block_sub<R: SuperRing>(ring: &R, a: &Block<R::Elem>, b: &Block<R::Elem>) -> Block<R::Elem> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(u, v)| ring.sub(u, v)).collect())
        .collect()
}

fn block_add<R: SuperRing>(ring: &R, a: &Block<R::Elem>, b: &Block<R::Elem>) -> Block<R::Elem> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(u, v)| ring.add(u, v)).collect())
        .collect()
}

fn block_scale<R: SuperRing>(ring: &R, a: &Block<R::Elem>, c: &R::Elem) -> Block<R::Elem> {
    a.iter()
        .map(|row| row.iter().map(|x| ring.mul(x, c)).collect())
        .collect()
}

fn block_neg<R: SuperRing>(ring: &R, a: &Block<R::Elem>) -> Block<R::Elem> {
    a.iter()
        .map(|row| row.iter().map(|x| ring.neg(x)).collect())
        .collect()
}

/// Determinant by cofactor expansion along rows, memoised on the set of
/// remaining columns. Products are formed in row order, so a single row of
/// odd entries is handled correctly; all other entries must be even.
pub fn determinant<R: SuperRing>(ring: &R, a: &Block<R::Elem>) -> R::Elem {
    let k = a.len();
    assert!(k <= 20, "determinant of {k}x{k} block is out of scope");
    assert!(
        a.iter().all(|r| r.len() == k),
        "determinant of a non-square block"
    );
    let mut memo: HashMap<u32, R::Elem> = HashMap::new();
    det_rec(ring, a, 0, (1u32 << k) - 1, &mut memo)
}

fn det_rec<R: SuperRing>(
    ring: &R,
    a: &Block<R::Elem>,
    row: usize,
    cols: u32,
    memo: &mut HashMap<u32, R::Elem>,
) -> R::Elem {
    if cols == 0 {
        return ring.one();
    }
    if let Some(v) = memo.get(&cols) {
        return v.clone();
    }
    let mut acc = ring.zero();
    let mut position = 0;
    for c in 0..a.len() {
        if cols & (1 << c) == 0 {
            continue;
        }
        let entry = &a[row][c];
        if !ring.is_zero(entry) {
            let minor = det_rec(ring, a, row + 1, cols & !(1 << c), memo);
            let term = ring.mul(entry, &minor);
            acc = if position % 2 == 0 {
                ring.add(&acc, &term)
            } else {
                ring.sub(&acc, &term)
            };
        }
        position += 1;
    }
    memo.insert(cols, acc.clone());
    acc
}

/// Classical adjugate of a block with even, mutually commuting entries.
pub fn adjugate<R: SuperRing>(ring: &R, a: &Block<R::Elem>) -> Block<R::Elem> {
    let k = a.len();
    if k == 1 {
        return vec![vec![ring.one()]];
    }
    let mut adj = vec![vec![ring.zero(); k]; k];
    for i in 0..k {
        for j in 0..k {
            let minor: Block<R::Elem> = (0..k)
                .filter(|&r| r != i)
                .map(|r| {
                    (0..k)
                        .filter(|&c| c != j)
                        .map(|c| a[r][c].clone())
                        .collect()
                })
                .collect();
            let d = determinant(ring, &minor);
            adj[j][i] = if (i + j) % 2 == 0 { d } else { ring.neg(&d) };
        }
    }
    adj
}

fn invert_block<R: SuperRing>(
    ring: &R,
    a: &Block<R::Elem>,
    what: &str,
) -> Result<(Block<R::Elem>, R::Elem)> {
    let det = determinant(ring, a);
    let inv = ring.try_invert(&det).ok_or_else(|| Error::NotInvertible {
        what: format!("det({what})"),
    })?;
    Ok((block_scale(ring, &adjugate(ring, a), &inv), inv))
}

/// `det(T1 - T2 T4^{-1} T3) * det(T4)^{-1}`.
pub fn berezinian<R: SuperRing>(ring: &R, a: &SuperMatrix<R::Elem>) -> Result<R::Elem> {
    let (m, n) = (a.dim.m, a.dim.n);
    let (t1, t2, t3, t4) = a.blocks();
    if n == 0 {
        return Ok(determinant(ring, &t1));
    }
    let (t4_inv, det4_inv) = invert_block(ring, &t4, "T4")?;
    if m == 0 {
        return Ok(det4_inv);
    }
    let schur = block_sub(
        ring,
        &t1,
        &block_mul(ring, &block_mul(ring, &t2, &t4_inv, n), &t3, n),
    );
    Ok(ring.mul(&determinant(ring, &schur), &det4_inv))
}

/// Berezinian of the parity-flipped matrix.
pub fn berezinian_star<R: SuperRing>(ring: &R, a: &SuperMatrix<R::Elem>) -> Result<R::Elem> {
    berezinian(ring, &parity_flip(a))
}

/// Inverse by the block formula, with `T4^{-1}` and the Schur complement
/// inverse computed as adjugate over determinant. Fails when a required
/// determinant is not certified as a unit by the ring.
pub fn block_invert<R: SuperRing>(
    ring: &R,
    a: &SuperMatrix<R::Elem>,
) -> Result<SuperMatrix<R::Elem>> {
    let (m, n) = (a.dim.m, a.dim.n);
    let (t1, t2, t3, t4) = a.blocks();
    if n == 0 {
        let (inv, _) = invert_block(ring, &t1, "T1")?;
        return Ok(SuperMatrix::from_blocks(a.dim, &inv, &t2, &t3, &t4));
    }
    let (d_inv, _) = invert_block(ring, &t4, "T4")?;
    if m == 0 {
        return Ok(SuperMatrix::from_blocks(a.dim, &t1, &t2, &t3, &d_inv));
    }
    let b_dinv = block_mul(ring, &t2, &d_inv, n);
    let schur = block_sub(ring, &t1, &block_mul(ring, &b_dinv, &t3, n));
    let (s_inv, _) = invert_block(ring, &schur, "T1 - T2 T4^-1 T3")?;
    let dinv_c = block_mul(ring, &d_inv, &t3, n);
    let top_right = block_neg(ring, &block_mul(ring, &s_inv, &b_dinv, m));
    let bottom_left = block_neg(ring, &block_mul(ring, &dinv_c, &s_inv, m));
    let correction = block_mul(ring, &block_mul(ring, &dinv_c, &s_inv, m), &b_dinv, m);
    let bottom_right = block_add(ring, &d_inv, &correction);
    Ok(SuperMatrix::from_blocks(
        a.dim,
        &s_inv,
        &top_right,
        &bottom_left,
        &bottom_right,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn qm(dim: SuperDim, rows: &[&[i64]]) -> SuperMatrix<Q> {
        SuperMatrix::from_rows(
            dim,
            rows.iter()
                .map(|r| r.iter().map(|&x| q(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn non_square_rows_are_rejected() {
        let err = SuperMatrix::from_rows(SuperDim::new(1, 1), vec![vec![q(1), q(2)], vec![q(3)]]);
        assert!(matches!(err, Err(Error::NotSquare { .. })));
        let err = SuperMatrix::from_rows(SuperDim::new(1, 1), vec![vec![q(1), q(2)]]);
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn koszul_permutation_signs() {
        use Parity::*;
        let ctx = KoszulContext::new(vec![Odd, Even, Odd]);
        assert_eq!(ctx.swap_exponent(0), 0);
        // reverse the three factors: the two odd ones pass each other once
        assert_eq!(ctx.permutation_exponent(&[2, 1, 0]), 1);
        assert_eq!(ctx.parity_before(2), Odd);
        assert_eq!(ctx.total_parity(), Even);
    }

    #[test]
    fn purely_even_berezinian_is_determinant() {
        let dim = SuperDim::new(3, 0);
        let a = qm(dim, &[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(berezinian(&Rationals, &a).unwrap(), q(18));
        assert_eq!(
            supertranspose(&Rationals, &a),
            qm(dim, &[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]])
        );
        let b = qm(dim, &[&[1, 2, 0], &[0, 1, 5], &[0, 0, 1]]);
        assert_eq!(
            supertranspose(&Rationals, &b),
            qm(dim, &[&[1, 0, 0], &[2, 1, 0], &[0, 5, 1]])
        );
    }

    #[test]
    fn diagonal_berezinian_and_flip() {
        let dim = SuperDim::new(1, 1);
        let a = qm(dim, &[&[3, 0], &[0, 5]]);
        assert_eq!(berezinian(&Rationals, &a).unwrap(), Q::from_signeds(3, 5));
        assert_eq!(
            berezinian_star(&Rationals, &a).unwrap(),
            Q::from_signeds(5, 3)
        );
        assert_eq!(
            parity_flip(&a),
            qm(SuperDim::new(1, 1), &[&[5, 0], &[0, 3]])
        );
        let inv = block_invert(&Rationals, &a).unwrap();
        assert_eq!(inv.get(0, 0), &Q::from_signeds(1, 3));
        assert_eq!(inv.get(1, 1), &Q::from_signeds(1, 5));
    }

    #[test]
    fn identity_cases() {
        for (m, n) in [(0, 1), (1, 0), (2, 1), (1, 2), (2, 2)] {
            let dim = SuperDim::new(m, n);
            let id = identity(&Rationals, dim);
            assert_eq!(supertranspose(&Rationals, &id), id);
            assert_eq!(parity_flip(&id), identity(&Rationals, dim.flipped()));
            assert_eq!(berezinian(&Rationals, &id).unwrap(), q(1));
            assert_eq!(berezinian_star(&Rationals, &id).unwrap(), q(1));
            assert_eq!(block_invert(&Rationals, &id).unwrap(), id);
        }
    }

    #[test]
    fn flip_is_an_involution() {
        let dim = SuperDim::new(2, 1);
        let a = qm(dim, &[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        let f = parity_flip(&a);
        assert_eq!(f.dim(), SuperDim::new(1, 2));
        assert_eq!(f.get(0, 0), &q(9));
        assert_eq!(f.get(0, 1), &q(7));
        assert_eq!(f.get(1, 0), &q(3));
        assert_eq!(parity_flip(&f), a);
    }

    #[test]
    fn singular_blocks_are_reported() {
        let dim = SuperDim::new(1, 1);
        let a = qm(dim, &[&[1, 0], &[0, 0]]);
        assert!(matches!(
            berezinian(&Rationals, &a),
            Err(Error::NotInvertible { .. })
        ));
        assert!(matches!(
            block_invert(&Rationals, &a),
            Err(Error::NotInvertible { .. })
        ));
        let b = qm(SuperDim::new(2, 1), &[&[1, 1, 0], &[1, 1, 0], &[0, 0, 1]]);
        assert!(matches!(
            block_invert(&Rationals, &b),
            Err(Error::NotInvertible { .. })
        ));
    }

    #[test]
    fn rational_block_inverse_multiplies_back() {
        let dim = SuperDim::new(2, 2);
        let a = qm(
            dim,
            &[&[2, 1, 0, 1], &[1, 1, 3, 0], &[0, 2, 1, 1], &[1, 0, 1, 2]],
        );
        let inv = block_invert(&Rationals, &a).unwrap();
        assert_eq!(mat_mul(&Rationals, &a, &inv), identity(&Rationals, dim));
        assert_eq!(mat_mul(&Rationals, &inv, &a), identity(&Rationals, dim));
    }

    #[test]
    fn adjugate_of_two_by_two() {
        let a = vec![vec![q(1), q(2)], vec![q(3), q(4)]];
        assert_eq!(
            adjugate(&Rationals, &a),
            vec![vec![q(4), q(-2)], vec![q(-3), q(1)]]
        );
        assert_eq!(determinant(&Rationals, &a), q(-2));
        assert_eq!(determinant(&Rationals, &Vec::<Vec<Q>>::new()), q(1));
    }
}
