//! The general linear Lie superalgebra `gl(m|n)`, its natural module
//! `V = k^{m|n}`, the dual `W = V*`, and the mixed tensor representation
//! `rho_{r,s}` on `T(r,s) = V^{(x)r} (x) W^{(x)s}`.
//!
//! Indices are zero-based: `E(a, b)` is the matrix unit with a one in row
//! `a`, column `b`, and index `i` is odd iff `i >= m`.

use std::collections::BTreeMap;
use std::fmt;

use crate::centralizer::MatrixSubalgebra;
use crate::rational::{sign_pow, One, Zero, Q};
use crate::sparse::SparseMatrix;
use crate::superlinalg::{Parity, SuperDim};
use crate::{Error, Result};

/// Default bound on `N^2` for representations on `T(r,s)`, `N = (m+n)^{r+s}`.
pub const DEFAULT_MAX_AMBIENT: u128 = 300_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GlBasisElement {
    pub a: usize,
    pub b: usize,
}

impl GlBasisElement {
    pub fn new(a: usize, b: usize) -> Self {
        Self { a, b }
    }

    pub fn parity(self, dim: SuperDim) -> Parity {
        dim.parity(self.a) + dim.parity(self.b)
    }

    /// All `E(a, b)` in row-major order.
    pub fn all(dim: SuperDim) -> Vec<Self> {
        let t = dim.total();
        (0..t)
            .flat_map(|a| (0..t).map(move |b| Self::new(a, b)))
            .collect()
    }

    /// `E(a, a+1)`, `E(a+1, a)` and the diagonal units: enough to generate
    /// `gl(m|n)` under the bracket, hence the same associative image.
    pub fn generating_set(dim: SuperDim) -> Vec<Self> {
        let t = dim.total();
        let mut out: Vec<Self> = (0..t).map(|a| Self::new(a, a)).collect();
        for a in 0..t.saturating_sub(1) {
            out.push(Self::new(a, a + 1));
            out.push(Self::new(a + 1, a));
        }
        out
    }
}

impl fmt::Display for GlBasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E{},{}", self.a + 1, self.b + 1)
    }
}

/// `[E_ab, E_cd] = d_bc E_ad - (-1)^{(|a|+|b|)(|c|+|d|)} d_da E_cb`.
pub fn bracket(dim: SuperDim, x: GlBasisElement, y: GlBasisElement) -> BTreeMap<GlBasisElement, Q> {
    let mut out: BTreeMap<GlBasisElement, Q> = BTreeMap::new();
    if x.b == y.a {
        *out.entry(GlBasisElement::new(x.a, y.b)).or_insert(Q::ZERO) += Q::ONE;
    }
    if y.b == x.a {
        let sign = sign_pow(x.parity(dim).koszul(y.parity(dim)));
        *out.entry(GlBasisElement::new(y.a, x.b)).or_insert(Q::ZERO) -= sign;
    }
    out.retain(|_, c| *c != 0u32);
    out
}

/// `E_ab e_c = d_bc e_a`.
pub fn action_on_v(dim: SuperDim, x: GlBasisElement) -> SparseMatrix {
    SparseMatrix::from_triplets(dim.total(), [(x.a, x.b, Q::ONE)])
}

/// Coefficient and image index of `E_ab . e*_c`, which is
/// `-(-1)^{(|a|+|b|)|c|} d_ac e*_b`.
fn dual_action(dim: SuperDim, x: GlBasisElement, c: usize) -> Option<(usize, Q)> {
    (x.a == c).then(|| (x.b, -sign_pow(x.parity(dim).koszul(dim.parity(c)))))
}

pub fn action_on_w(dim: SuperDim, x: GlBasisElement) -> SparseMatrix {
    let (b, coeff) = dual_action(dim, x, x.a).unwrap();
    SparseMatrix::from_triplets(dim.total(), [(b, x.a, coeff)])
}

/// A basis vector `e_{v_1} (x) ... (x) e_{v_r} (x) e*_{w_1} (x) ... (x) e*_{w_s}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TensorBasisIndex {
    pub v: Vec<usize>,
    pub w: Vec<usize>,
}

impl TensorBasisIndex {
    pub fn factors(&self) -> impl Iterator<Item = usize> + '_ {
        self.v.iter().chain(self.w.iter()).copied()
    }
}

/// `T(r,s)` with its basis enumerated row-major over the index tuple (the
/// first factor is the most significant digit).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TensorSpace {
    pub dim: SuperDim,
    pub r: usize,
    pub s: usize,
}

impl TensorSpace {
    pub fn new(dim: SuperDim, r: usize, s: usize) -> Self {
        Self { dim, r, s }
    }

    pub fn factors(&self) -> usize {
        self.r + self.s
    }

    /// `N = (m+n)^{r+s}`, or `None` on overflow.
    pub fn checked_size(&self) -> Option<usize> {
        self.dim.total().checked_pow(self.factors() as u32)
    }

    pub fn size(&self) -> usize {
        self.checked_size().expect("tensor space size overflows")
    }

    pub fn digits(&self, mut k: usize) -> Vec<usize> {
        let t = self.dim.total();
        let mut d = vec![0; self.factors()];
        for slot in d.iter_mut().rev() {
            *slot = k % t;
            k /= t;
        }
        d
    }

    pub fn index_of_digits(&self, digits: &[usize]) -> usize {
        let t = self.dim.total();
        digits.iter().fold(0, |acc, &d| acc * t + d)
    }

    pub fn basis_index(&self, k: usize) -> TensorBasisIndex {
        let mut v = self.digits(k);
        let w = v.split_off(self.r);
        TensorBasisIndex { v, w }
    }

    pub fn index(&self, b: &TensorBasisIndex) -> usize {
        let digits: Vec<usize> = b.factors().collect();
        self.index_of_digits(&digits)
    }

    pub fn parity(&self, k: usize) -> Parity {
        self.digits(k)
            .into_iter()
            .fold(Parity::Even, |p, d| p + self.dim.parity(d))
    }

    /// Weight of a basis vector: `e_i` contributes `+eps_i`, `e*_i`
    /// contributes `-eps_i`.
    pub fn weight(&self, k: usize) -> Vec<i32> {
        let mut w = vec![0; self.dim.total()];
        for (pos, d) in self.digits(k).into_iter().enumerate() {
            w[d] += if pos < self.r { 1 } else { -1 };
        }
        w
    }

    pub fn check_limit(&self, limit: u128) -> Result<()> {
        let n = self.checked_size().map(|n| n as u128).unwrap_or(u128::MAX);
        let required = n.saturating_mul(n);
        if required > limit {
            return Err(Error::ResourceLimit {
                what: format!("T({},{}) at {}", self.r, self.s, self.dim),
                required,
                limit,
            });
        }
        Ok(())
    }
}

/// Upper bound of the Koszul sign sum in the Leibniz rule.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SignConvention {
    /// Parities of the factors strictly before the acted factor.
    #[default]
    StrictlyBefore,
    /// Parities up to and including the acted factor.
    Inclusive,
}

#[derive(Clone, Debug)]
pub struct RepresentationMatrixSet {
    pub space: TensorSpace,
    pub matrices: BTreeMap<GlBasisElement, SparseMatrix>,
}

impl RepresentationMatrixSet {
    pub fn get(&self, x: GlBasisElement) -> &SparseMatrix {
        &self.matrices[&x]
    }

    pub fn size(&self) -> usize {
        self.space.size()
    }

    pub fn generating_matrices(&self) -> Vec<SparseMatrix> {
        GlBasisElement::generating_set(self.space.dim)
            .into_iter()
            .map(|x| self.get(x).clone())
            .collect()
    }

    pub fn all_matrices(&self) -> Vec<SparseMatrix> {
        self.matrices.values().cloned().collect()
    }
}

fn rho_single(space: TensorSpace, x: GlBasisElement, convention: SignConvention) -> SparseMatrix {
    let dim = space.dim;
    let px = x.parity(dim);
    let mut triplets = Vec::new();
    for col in 0..space.size() {
        let digits = space.digits(col);
        let mut before = Parity::Even;
        for (k, &d) in digits.iter().enumerate() {
            let image = if k < space.r {
                (x.b == d).then_some((x.a, Q::ONE))
            } else {
                dual_action(dim, x, d)
            };
            let upto = before + dim.parity(d);
            let sum = match convention {
                SignConvention::StrictlyBefore => before,
                SignConvention::Inclusive => upto,
            };
            before = upto;
            if let Some((nd, coeff)) = image {
                let mut out = digits.clone();
                out[k] = nd;
                triplets.push((
                    space.index_of_digits(&out),
                    col,
                    coeff * sign_pow(px.koszul(sum)),
                ));
            }
        }
    }
    SparseMatrix::from_triplets(space.size(), triplets)
}

/// `rho_{r,s}(E_ab)` for every basis element, by the Leibniz rule with the
/// Koszul sign over the factors strictly before the acted one.
pub fn rho_rs(dim: SuperDim, r: usize, s: usize, limit: u128) -> Result<RepresentationMatrixSet> {
    rho_rs_with(dim, r, s, SignConvention::StrictlyBefore, limit)
}

pub fn rho_rs_with(
    dim: SuperDim,
    r: usize,
    s: usize,
    convention: SignConvention,
    limit: u128,
) -> Result<RepresentationMatrixSet> {
    let space = TensorSpace::new(dim, r, s);
    space.check_limit(limit)?;
    let matrices = GlBasisElement::all(dim)
        .into_iter()
        .map(|x| (x, rho_single(space, x, convention)))
        .collect();
    Ok(RepresentationMatrixSet { space, matrices })
}

/// First pair `(x, y)` with `rho([x,y]) != [rho(x), rho(y)]`, if any.
pub fn representation_failure(
    reps: &RepresentationMatrixSet,
) -> Option<(GlBasisElement, GlBasisElement)> {
    let dim = reps.space.dim;
    let n = reps.size();
    for (&x, rx) in &reps.matrices {
        for (&y, ry) in &reps.matrices {
            let mut lhs = SparseMatrix::zero(n);
            for (z, c) in bracket(dim, x, y) {
                lhs = lhs.add_scaled(reps.get(z), &c);
            }
            let sign = sign_pow(x.parity(dim).koszul(y.parity(dim)));
            if lhs != rx.supercommutator(ry, &sign) {
                return Some((x, y));
            }
        }
    }
    None
}

pub fn verify_representation(reps: &RepresentationMatrixSet) -> bool {
    representation_failure(reps).is_none()
}

/// Each `rho(E_ab)` shifts the grading by `|a| + |b|`.
pub fn verify_parity_homogeneity(reps: &RepresentationMatrixSet) -> bool {
    let space = reps.space;
    let parities: Vec<Parity> = (0..space.size()).map(|k| space.parity(k)).collect();
    reps.matrices.iter().all(|(x, m)| {
        let px = x.parity(space.dim);
        m.triplets()
            .all(|(i, j, _)| parities[i] == parities[j] + px)
    })
}

/// The unital algebra generated by the representation matrices.
pub fn image_algebra(
    reps: &RepresentationMatrixSet,
    max_dimension: usize,
) -> Result<MatrixSubalgebra> {
    MatrixSubalgebra::generated_by(reps.size(), reps.generating_matrices(), max_dimension)
}

/// Dimension of the span of the matrix-coefficient functionals of `rho`,
/// which is the dimension of the image algebra.
pub fn coefficient_space_dim(
    reps: &RepresentationMatrixSet,
    max_dimension: usize,
) -> Result<usize> {
    Ok(image_algebra(reps, max_dimension)?.dimension())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn e(a: usize, b: usize) -> GlBasisElement {
        GlBasisElement::new(a, b)
    }

    #[test]
    fn brackets() {
        let d = SuperDim::new(1, 1);
        assert!(bracket(d, e(0, 0), e(0, 0)).is_empty());
        let odd = bracket(d, e(0, 1), e(1, 0));
        assert_eq!(odd, BTreeMap::from([(e(0, 0), q(1)), (e(1, 1), q(1))]));
        assert_eq!(
            bracket(d, e(0, 0), e(0, 1)),
            BTreeMap::from([(e(0, 1), q(1))])
        );
        let even = bracket(SuperDim::new(2, 0), e(0, 1), e(1, 0));
        assert_eq!(even, BTreeMap::from([(e(0, 0), q(1)), (e(1, 1), q(-1))]));
    }

    #[test]
    fn natural_and_dual_actions() {
        let d = SuperDim::new(1, 1);
        assert_eq!(action_on_v(d, e(0, 0)).get(0, 0), q(1));
        assert_eq!(action_on_v(d, e(0, 1)).get(0, 1), q(1));
        assert_eq!(action_on_v(d, e(0, 1)).get(1, 0), q(0));
        assert_eq!(action_on_w(d, e(0, 0)).get(0, 0), q(-1));
        let w12 = action_on_w(d, e(0, 1));
        assert!((0..2).all(|i| w12.get(i, 1) == 0u32));
        // E21 e2* = -(-1)^{1*1} e1* = e1*
        assert_eq!(action_on_w(d, e(1, 0)).get(0, 1), q(1));
    }

    #[test]
    fn single_factor_is_the_natural_action() {
        let d = SuperDim::new(2, 1);
        let reps = rho_rs(d, 1, 0, DEFAULT_MAX_AMBIENT).unwrap();
        for x in GlBasisElement::all(d) {
            assert_eq!(reps.get(x), &action_on_v(d, x));
        }
        let reps = rho_rs(d, 0, 1, DEFAULT_MAX_AMBIENT).unwrap();
        for x in GlBasisElement::all(d) {
            assert_eq!(reps.get(x), &action_on_w(d, x));
        }
    }

    #[test]
    fn empty_tensor_product() {
        let reps = rho_rs(SuperDim::new(1, 1), 0, 0, DEFAULT_MAX_AMBIENT).unwrap();
        assert_eq!(reps.size(), 1);
        assert!(reps.matrices.values().all(SparseMatrix::is_zero));
        assert_eq!(image_algebra(&reps, 10).unwrap().dimension(), 1);
    }

    #[test]
    fn inclusive_sign_convention_breaks_the_bracket() {
        let d = SuperDim::new(1, 1);
        let good = rho_rs(d, 1, 1, DEFAULT_MAX_AMBIENT).unwrap();
        assert!(verify_representation(&good));
        assert!(verify_parity_homogeneity(&good));
        let bad = rho_rs_with(d, 2, 0, SignConvention::Inclusive, DEFAULT_MAX_AMBIENT).unwrap();
        assert!(!verify_representation(&bad));
    }

    #[test]
    fn index_round_trip() {
        let space = TensorSpace::new(SuperDim::new(2, 1), 2, 1);
        for k in 0..space.size() {
            assert_eq!(space.index(&space.basis_index(k)), k);
        }
        assert_eq!(
            space.basis_index(1),
            TensorBasisIndex {
                v: vec![0, 0],
                w: vec![1]
            }
        );
    }

    #[test]
    fn resource_guard() {
        let err = rho_rs(SuperDim::new(3, 3), 3, 3, DEFAULT_MAX_AMBIENT).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit { .. }));
    }

    #[test]
    fn full_matrix_algebra_on_v() {
        let reps = rho_rs(SuperDim::new(1, 1), 1, 0, DEFAULT_MAX_AMBIENT).unwrap();
        assert_eq!(coefficient_space_dim(&reps, 100).unwrap(), 4);
    }
}
