//! The walled Brauer algebra `B_{r,s}(delta)` and its action on `T(r,s)`.
//!
//! A diagram has a top and a bottom row of `r + s` vertices; the first `r`
//! positions of each row are the `V` side of the wall. Vertex ids are
//! `0..r+s` for the top row and `r+s..2(r+s)` for the bottom row. Diagrams
//! act on `T(r,s)` with the input read off the top row, so stacking `d1`
//! above `d2` acts as `act(d2) * act(d1)`: the algebra acts on the right.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use itertools::Itertools;

use crate::centralizer::MatrixSubalgebra;
use crate::liealg::{rho_rs, GlBasisElement, TensorSpace, DEFAULT_MAX_AMBIENT};
use crate::rational::{q, sign_pow, One, Zero, Q};
use crate::sparse::SparseMatrix;
use crate::superlinalg::{KoszulContext, Parity, SuperDim};
use crate::{Error, Result};

/// Default bound on the number of diagrams, `(r+s)!`.
pub const DEFAULT_MAX_DIAGRAMS: u128 = 40_320;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WalledDiagram {
    r: usize,
    s: usize,
    partner: Vec<usize>,
}

impl fmt::Debug for WalledDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "WalledDiagram({},{}; {:?})",
            self.r,
            self.s,
            self.pairs()
        )
    }
}

impl WalledDiagram {
    /// Builds a diagram from its edges, checking that they form a perfect
    /// matching that respects the wall.
    pub fn from_pairs(r: usize, s: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let k = r + s;
        let mut partner = vec![usize::MAX; 2 * k];
        for &(a, b) in pairs {
            if a >= 2 * k
                || b >= 2 * k
                || a == b
                || partner[a] != usize::MAX
                || partner[b] != usize::MAX
            {
                return Err(Error::Verification(format!("invalid edge ({a},{b})")));
            }
            partner[a] = b;
            partner[b] = a;
        }
        if partner.contains(&usize::MAX) {
            return Err(Error::Verification("not a perfect matching".into()));
        }
        let d = Self { r, s, partner };
        if !d.respects_wall() {
            return Err(Error::Verification("edge violates the wall".into()));
        }
        Ok(d)
    }

    fn respects_wall(&self) -> bool {
        (0..2 * self.size()).all(|a| {
            let b = self.partner[a];
            let same_row = self.is_top(a) == self.is_top(b);
            let same_side = self.is_v(a) == self.is_v(b);
            same_row != same_side
        })
    }

    pub fn identity(r: usize, s: usize) -> Self {
        let k = r + s;
        let pairs: Vec<_> = (0..k).map(|i| (i, k + i)).collect();
        Self::from_pairs(r, s, &pairs).unwrap()
    }

    /// Transposition of positions `i` and `i + 1` on one side of the wall.
    pub fn transposition(r: usize, s: usize, i: usize) -> Result<Self> {
        let k = r + s;
        if i + 1 >= k || i + 1 == r {
            return Err(Error::IndexOutOfRange { index: i, max: k });
        }
        let pairs: Vec<_> = (0..k)
            .map(|p| {
                let q = if p == i {
                    i + 1
                } else if p == i + 1 {
                    i
                } else {
                    p
                };
                (p, k + q)
            })
            .collect();
        Self::from_pairs(r, s, &pairs)
    }

    /// The contraction across the wall on positions `r - 1` and `r`.
    pub fn contraction(r: usize, s: usize) -> Result<Self> {
        if r == 0 || s == 0 {
            return Err(Error::IndexOutOfRange {
                index: r,
                max: r + s,
            });
        }
        let k = r + s;
        let mut pairs = vec![(r - 1, r), (k + r - 1, k + r)];
        pairs.extend((0..k).filter(|&p| p != r - 1 && p != r).map(|p| (p, k + p)));
        Self::from_pairs(r, s, &pairs)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn s(&self) -> usize {
        self.s
    }

    /// Number of positions per row.
    pub fn size(&self) -> usize {
        self.r + self.s
    }

    pub fn partner(&self, v: usize) -> usize {
        self.partner[v]
    }

    pub fn is_top(&self, v: usize) -> bool {
        v < self.size()
    }

    pub fn is_v(&self, v: usize) -> bool {
        v % self.size() < self.r
    }

    /// Edges as sorted pairs `(a, b)` with `a < b`, in increasing order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.partner.len())
            .filter(|&a| a < self.partner[a])
            .map(|a| (a, self.partner[a]))
            .collect()
    }
}

/// All `(r+s)!` walled diagrams. They correspond to bijections from
/// {top V, bottom W} to {bottom V, top W}.
pub fn enumerate_diagrams(r: usize, s: usize, limit: u128) -> Result<Vec<WalledDiagram>> {
    let k = r + s;
    let count: u128 = (1..=k as u128).product();
    if count > limit {
        return Err(Error::ResourceLimit {
            what: format!("walled Brauer diagrams for ({r},{s})"),
            required: count,
            limit,
        });
    }
    let left: Vec<usize> = (0..r).chain(k + r..2 * k).collect();
    let right: Vec<usize> = (k..k + r).chain(r..k).collect();
    let mut out: Vec<WalledDiagram> = right
        .iter()
        .copied()
        .permutations(k)
        .map(|image| {
            let pairs: Vec<_> = left.iter().copied().zip(image).collect();
            WalledDiagram::from_pairs(r, s, &pairs).expect("bijection gives a walled diagram")
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Stacks `top` above `bottom`; returns the resulting diagram and the
/// number of closed loops.
pub fn compose(top: &WalledDiagram, bottom: &WalledDiagram) -> (WalledDiagram, usize) {
    assert_eq!(
        (top.r, top.s),
        (bottom.r, bottom.s),
        "diagrams of different shapes"
    );
    let k = top.size();
    // vertices are (level, position): level 0 is the top row of `top`, level 1
    // the shared middle row, level 2 the bottom row of `bottom`
    let through_top = |level: usize, p: usize| {
        let w = top.partner[level * k + p];
        (w / k, w % k)
    };
    let through_bottom = |level: usize, p: usize| {
        let w = bottom.partner[(level - 1) * k + p];
        (1 + w / k, w % k)
    };
    let mut seen = vec![false; k];
    let mut partner = vec![usize::MAX; 2 * k];
    let external = |level: usize, p: usize| if level == 0 { p } else { k + p };
    for (level, p) in (0..k).map(|p| (0, p)).chain((0..k).map(|p| (2, p))) {
        if partner[external(level, p)] != usize::MAX {
            continue;
        }
        let mut use_top = level == 0;
        let mut at = (level, p);
        let end = loop {
            let next = if use_top {
                through_top(at.0, at.1)
            } else {
                through_bottom(at.0, at.1)
            };
            if next.0 != 1 {
                break next;
            }
            seen[next.1] = true;
            at = next;
            use_top = !use_top;
        };
        partner[external(level, p)] = external(end.0, end.1);
        partner[external(end.0, end.1)] = external(level, p);
    }
    let mut loops = 0;
    for p0 in 0..k {
        if seen[p0] {
            continue;
        }
        loops += 1;
        let mut p = p0;
        let mut use_top = true;
        loop {
            seen[p] = true;
            let (_, np) = if use_top {
                through_top(1, p)
            } else {
                through_bottom(1, p)
            };
            use_top = !use_top;
            p = np;
            if p == p0 && use_top {
                break;
            }
        }
    }
    let d = WalledDiagram {
        r: top.r,
        s: top.s,
        partner,
    };
    debug_assert!(d.respects_wall());
    (d, loops)
}

/// Linear combination of diagrams with the loop value `delta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrauerElement {
    pub terms: BTreeMap<WalledDiagram, Q>,
    pub delta: Q,
}

impl BrauerElement {
    pub fn diagram(d: WalledDiagram, delta: Q) -> Self {
        Self {
            terms: BTreeMap::from([(d, Q::ONE)]),
            delta,
        }
    }

    /// Product with `self` stacked above `other`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.delta, other.delta, "different loop values");
        let mut terms: BTreeMap<WalledDiagram, Q> = BTreeMap::new();
        for (d1, c1) in &self.terms {
            for (d2, c2) in &other.terms {
                let (d, loops) = compose(d1, d2);
                let mut c = c1 * c2;
                for _ in 0..loops {
                    c *= &self.delta;
                }
                *terms.entry(d).or_insert(Q::ZERO) += c;
            }
        }
        terms.retain(|_, c| *c != 0u32);
        Self {
            terms,
            delta: self.delta.clone(),
        }
    }
}

/// `compose` with the loop factor, as a Brauer element.
pub fn compose_element(top: &WalledDiagram, bottom: &WalledDiagram, delta: &Q) -> BrauerElement {
    BrauerElement::diagram(top.clone(), delta.clone())
        .mul(&BrauerElement::diagram(bottom.clone(), delta.clone()))
}

/// Signs of the evaluation `V (x) W -> k` and coevaluation `k -> V (x) W`
/// on odd basis indices; even indices always carry `+1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ContractionSigns {
    pub ev_odd: i8,
    pub coev_odd: i8,
}

impl ContractionSigns {
    fn ev(self, parity: Parity) -> Q {
        if parity.is_odd() {
            q(self.ev_odd as i64)
        } else {
            Q::ONE
        }
    }

    fn coev(self, parity: Parity) -> Q {
        if parity.is_odd() {
            q(self.coev_odd as i64)
        } else {
            Q::ONE
        }
    }

    /// `ev . coev`, the value of a closed loop.
    pub fn loop_value(self, dim: SuperDim) -> Q {
        (0..dim.total()).fold(Q::ZERO, |acc, c| {
            let p = dim.parity(c);
            acc + self.ev(p) * self.coev(p)
        })
    }
}

/// First sign choice, in the order `(+,+), (+,-), (-,+), (-,-)`, for which
/// the wall contraction commutes with `rho_{1,1}` on `(1|1)`.
pub fn search_contraction_signs() -> ContractionSigns {
    static SIGNS: OnceLock<ContractionSigns> = OnceLock::new();
    *SIGNS.get_or_init(|| {
        let dim = SuperDim::new(1, 1);
        let reps = rho_rs(dim, 1, 1, DEFAULT_MAX_AMBIENT).expect("tiny representation");
        for (ev_odd, coev_odd) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
            let signs = ContractionSigns { ev_odd, coev_odd };
            let e = wall_contraction_matrix(TensorSpace::new(dim, 1, 1), signs);
            if reps.matrices.values().all(|x| x.commutes_with(&e)) {
                return signs;
            }
        }
        panic!("no sign choice makes the contraction a module map");
    })
}

fn koszul_sign(parities: Vec<Parity>, target: &[usize]) -> Q {
    sign_pow(KoszulContext::new(parities).permutation_exponent(target))
}

/// Super flip of the factors at positions `i` and `i + 1`.
pub fn flip_matrix(space: TensorSpace, i: usize) -> SparseMatrix {
    let triplets = (0..space.size()).map(|col| {
        let mut d = space.digits(col);
        let sign = sign_pow(space.dim.parity(d[i]).koszul(space.dim.parity(d[i + 1])));
        d.swap(i, i + 1);
        (space.index_of_digits(&d), col, sign)
    });
    SparseMatrix::from_triplets(space.size(), triplets.collect::<Vec<_>>())
}

/// Evaluation on positions `(r-1, r)` followed by coevaluation there.
pub fn wall_contraction_matrix(space: TensorSpace, signs: ContractionSigns) -> SparseMatrix {
    let (i, t) = (space.r - 1, space.dim.total());
    let mut triplets = Vec::new();
    for col in 0..space.size() {
        let d = space.digits(col);
        if d[i] != d[i + 1] {
            continue;
        }
        let ev = signs.ev(space.dim.parity(d[i]));
        for c in 0..t {
            let mut out = d.clone();
            out[i] = c;
            out[i + 1] = c;
            triplets.push((
                space.index_of_digits(&out),
                col,
                &ev * signs.coev(space.dim.parity(c)),
            ));
        }
    }
    SparseMatrix::from_triplets(space.size(), triplets)
}

/// Matrix of a diagram built directly: the input tokens are reordered so
/// that each cup sits at the front as an adjacent `(v, f)` pair and is
/// evaluated; then coevaluated pairs are prepended to the surviving tokens
/// and everything is reordered into the bottom positions. Each reordering
/// carries its Koszul sign.
pub fn act_on_t(d: &WalledDiagram, dim: SuperDim, limit: u128) -> Result<SparseMatrix> {
    act_with_signs(d, dim, search_contraction_signs(), limit)
}

pub fn act_with_signs(
    d: &WalledDiagram,
    dim: SuperDim,
    signs: ContractionSigns,
    limit: u128,
) -> Result<SparseMatrix> {
    let space = TensorSpace::new(dim, d.r, d.s);
    space.check_limit(limit)?;
    let k = d.size();
    let t = dim.total();
    let top_pairs: Vec<(usize, usize)> = (0..d.r)
        .filter(|&i| d.is_top(d.partner[i]))
        .map(|i| (i, d.partner[i]))
        .collect();
    let bottom_pairs: Vec<(usize, usize)> = (0..d.r)
        .filter(|&j| !d.is_top(d.partner[k + j]))
        .map(|j| (j, d.partner[k + j] - k))
        .collect();
    let through: Vec<(usize, usize)> = (0..k)
        .filter(|&i| !d.is_top(d.partner[i]))
        .map(|i| (i, d.partner[i] - k))
        .collect();
    // first reordering: cups to the front, survivors keep their order
    let mut first_target = vec![0; k];
    let mut slot = 0;
    for &(i, w) in &top_pairs {
        first_target[i] = slot;
        first_target[w] = slot + 1;
        slot += 2;
    }
    for &(i, _) in &through {
        first_target[i] = slot;
        slot += 1;
    }
    let mut triplets = Vec::new();
    for col in 0..space.size() {
        let x = space.digits(col);
        if top_pairs.iter().any(|&(i, w)| x[i] != x[w]) {
            continue;
        }
        let parities: Vec<Parity> = x.iter().map(|&c| dim.parity(c)).collect();
        let mut coeff = koszul_sign(parities, &first_target);
        for &(i, _) in &top_pairs {
            coeff *= signs.ev(dim.parity(x[i]));
        }
        // second reordering: caps then survivors, into bottom positions
        let mut source_target = Vec::with_capacity(k);
        for &(j, l) in &bottom_pairs {
            source_target.push(j);
            source_target.push(l);
        }
        source_target.extend(through.iter().map(|&(_, j)| j));
        for caps in (0..bottom_pairs.len())
            .map(|_| 0..t)
            .multi_cartesian_product()
        {
            let mut out = vec![0; k];
            let mut parities = Vec::with_capacity(k);
            let mut c = coeff.clone();
            for (&(j, l), &cap) in bottom_pairs.iter().zip(&caps) {
                out[j] = cap;
                out[l] = cap;
                parities.push(dim.parity(cap));
                parities.push(dim.parity(cap));
                c *= signs.coev(dim.parity(cap));
            }
            for &(i, j) in &through {
                out[j] = x[i];
                parities.push(dim.parity(x[i]));
            }
            c *= koszul_sign(parities, &source_target);
            triplets.push((space.index_of_digits(&out), col, c));
        }
    }
    Ok(SparseMatrix::from_triplets(space.size(), triplets))
}

/// Generator diagrams with their matrices: transpositions on each side of
/// the wall and the wall contraction.
pub fn generator_matrices(
    dim: SuperDim,
    r: usize,
    s: usize,
    limit: u128,
) -> Result<Vec<(WalledDiagram, SparseMatrix)>> {
    let space = TensorSpace::new(dim, r, s);
    space.check_limit(limit)?;
    let mut out = Vec::new();
    for i in (0..r.saturating_sub(1)).chain(r..(r + s).saturating_sub(1)) {
        out.push((
            WalledDiagram::transposition(r, s, i)?,
            flip_matrix(space, i),
        ));
    }
    if r > 0 && s > 0 {
        out.push((
            WalledDiagram::contraction(r, s)?,
            wall_contraction_matrix(space, search_contraction_signs()),
        ));
    }
    Ok(out)
}

/// Matrices of all diagrams reached from the identity by loop-free
/// products with generators, using only generator matrices.
pub fn act_by_generators(
    dim: SuperDim,
    r: usize,
    s: usize,
    limit: u128,
) -> Result<HashMap<WalledDiagram, SparseMatrix>> {
    let gens = generator_matrices(dim, r, s, limit)?;
    let space = TensorSpace::new(dim, r, s);
    let id = WalledDiagram::identity(r, s);
    let mut found = HashMap::from([(id.clone(), SparseMatrix::identity(space.size()))]);
    let mut queue = VecDeque::from([id]);
    while let Some(d) = queue.pop_front() {
        for (g, gm) in &gens {
            let (next, loops) = compose(&d, g);
            if loops == 0 && !found.contains_key(&next) {
                let m = gm.mul(&found[&d]);
                found.insert(next.clone(), m);
                queue.push_back(next);
            }
        }
    }
    Ok(found)
}

/// Span of all diagram matrices, with the generator matrices recorded.
pub fn image_algebra_brauer(
    dim: SuperDim,
    r: usize,
    s: usize,
    limit: u128,
) -> Result<MatrixSubalgebra> {
    let diagrams = enumerate_diagrams(r, s, DEFAULT_MAX_DIAGRAMS)?;
    let mats = diagrams
        .iter()
        .map(|d| act_on_t(d, dim, limit))
        .collect::<Result<Vec<_>>>()?;
    let gens = generator_matrices(dim, r, s, limit)?
        .into_iter()
        .map(|(_, m)| m)
        .collect();
    Ok(MatrixSubalgebra::from_span(TensorSpace::new(dim, r, s).size(), mats).with_generators(gens))
}

/// Whether every diagram matrix commutes with every `rho(E_ab)`.
pub fn verify_commutation(dim: SuperDim, r: usize, s: usize, limit: u128) -> Result<bool> {
    let reps = rho_rs(dim, r, s, limit)?;
    let diagrams = enumerate_diagrams(r, s, DEFAULT_MAX_DIAGRAMS)?;
    for d in &diagrams {
        let m = act_on_t(d, dim, limit)?;
        if !GlBasisElement::all(dim)
            .into_iter()
            .all(|x| reps.get(x).commutes_with(&m))
        {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    const L: u128 = DEFAULT_MAX_AMBIENT;

    #[test]
    fn diagram_counts() {
        let counts: Vec<usize> = [(1, 0), (1, 1), (2, 1), (2, 2), (0, 3)]
            .iter()
            .map(|&(r, s)| {
                enumerate_diagrams(r, s, DEFAULT_MAX_DIAGRAMS)
                    .unwrap()
                    .len()
            })
            .collect();
        assert_eq!(counts, vec![1, 2, 6, 24, 6]);
        assert!(enumerate_diagrams(5, 5, DEFAULT_MAX_DIAGRAMS).is_err());
    }

    #[test]
    fn composition_basics() {
        let id = WalledDiagram::identity(1, 1);
        assert_eq!(compose(&id, &id), (id.clone(), 0));
        let e = WalledDiagram::contraction(1, 1).unwrap();
        assert_eq!(compose(&e, &e), (e.clone(), 1));
        let s = WalledDiagram::transposition(2, 1, 0).unwrap();
        assert_eq!(compose(&s, &s), (WalledDiagram::identity(2, 1), 0));
    }

    #[test]
    fn composition_is_associative() {
        for (r, s) in [(1, 1), (2, 1)] {
            let ds = enumerate_diagrams(r, s, DEFAULT_MAX_DIAGRAMS).unwrap();
            let delta = q(3);
            for a in &ds {
                for b in &ds {
                    for c in &ds {
                        let ab = compose_element(a, b, &delta)
                            .mul(&BrauerElement::diagram(c.clone(), delta.clone()));
                        let bc = BrauerElement::diagram(a.clone(), delta.clone())
                            .mul(&compose_element(b, c, &delta));
                        assert_eq!(ab, bc);
                    }
                }
            }
        }
    }

    #[test]
    fn contraction_signs_are_found() {
        let signs = search_contraction_signs();
        assert_eq!(
            signs,
            ContractionSigns {
                ev_odd: -1,
                coev_odd: 1
            }
        );
        assert_eq!(signs.loop_value(SuperDim::new(3, 1)), q(2));
    }

    #[test]
    fn contraction_matrix_values() {
        let e = WalledDiagram::contraction(1, 1).unwrap();
        let m = act_on_t(&e, SuperDim::new(3, 1), L).unwrap();
        assert_eq!(m.rank(), 1);
        assert_eq!(m.mul(&m), m.scaled(&q(2)));
        let m = act_on_t(&e, SuperDim::new(1, 1), L).unwrap();
        assert!(m.mul(&m).is_zero());
        assert!(!m.is_zero());
    }

    #[test]
    fn direct_action_matches_generators() {
        for (dim, r, s) in [
            (SuperDim::new(1, 1), 1, 1),
            (SuperDim::new(2, 1), 2, 1),
            (SuperDim::new(1, 2), 1, 2),
            (SuperDim::new(1, 1), 2, 2),
        ] {
            let by_gens = act_by_generators(dim, r, s, L).unwrap();
            let all = enumerate_diagrams(r, s, DEFAULT_MAX_DIAGRAMS).unwrap();
            assert_eq!(by_gens.len(), all.len());
            for d in &all {
                assert_eq!(&act_on_t(d, dim, L).unwrap(), &by_gens[d], "{d:?}");
            }
        }
    }

    #[test]
    fn action_is_compatible_with_composition() {
        for dim in [SuperDim::new(2, 1), SuperDim::new(3, 1)] {
            let delta = search_contraction_signs().loop_value(dim);
            let ds = enumerate_diagrams(2, 1, DEFAULT_MAX_DIAGRAMS).unwrap();
            for a in &ds {
                for b in &ds {
                    let (c, loops) = compose(a, b);
                    let factor = (0..loops).fold(Q::ONE, |acc, _| acc * &delta);
                    let lhs = act_on_t(&c, dim, L).unwrap().scaled(&factor);
                    let rhs = act_on_t(b, dim, L)
                        .unwrap()
                        .mul(&act_on_t(a, dim, L).unwrap());
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn diagrams_commute_with_the_lie_action() {
        assert!(verify_commutation(SuperDim::new(1, 1), 1, 1, L).unwrap());
        assert!(verify_commutation(SuperDim::new(2, 1), 2, 1, L).unwrap());
        assert!(verify_commutation(SuperDim::new(1, 2), 1, 2, L).unwrap());
    }

    #[test]
    fn brauer_image_dimensions() {
        assert_eq!(
            image_algebra_brauer(SuperDim::new(3, 1), 1, 1, L)
                .unwrap()
                .dimension(),
            2
        );
        assert_eq!(
            image_algebra_brauer(SuperDim::new(3, 1), 1, 0, L)
                .unwrap()
                .dimension(),
            1
        );
        let b = image_algebra_brauer(SuperDim::new(1, 1), 1, 1, L).unwrap();
        assert_eq!(b.dimension(), 2);
        assert!(b.verify_closure());
    }
}
