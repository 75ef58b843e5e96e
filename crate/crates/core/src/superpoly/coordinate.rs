use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use super::tensor::{FormalTensor, TensorSquareElement};
use super::{LocalizedElement, LocalizedRing, PolyRing, SuperPolynomial};
use crate::rational::{sign_pow, One, Zero, Q};
use crate::superlinalg::{
    berezinian, berezinian_star, block_invert, determinant, Parity, SuperDim, SuperMatrix,
    SuperRing,
};
use crate::{Error, Result};

/// A failed identity: which one, where, and the nonzero difference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityFailure {
    pub identity: String,
    pub location: String,
    pub difference: String,
}

impl IdentityFailure {
    fn new(identity: &str, i: usize, j: usize, difference: LocalizedElement) -> Self {
        Self {
            identity: identity.to_string(),
            location: format!("({i},{j})"),
            difference: format!("{difference:?}"),
        }
    }
}

impl fmt::Display for IdentityFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} fails at {}: difference {}",
            self.identity, self.location, self.difference
        )
    }
}

/// Generator symbols of the coordinate ring: `X(i, j)` is `x_ij` and
/// `XTilde(i, j)` is the `(i, j)` entry of the inverse generic matrix.
/// Indices are zero-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    X(usize, usize),
    XTilde(usize, usize),
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::X(i, j) => write!(f, "x{}{}", i + 1, j + 1),
            Generator::XTilde(i, j) => write!(f, "xt{}{}", i + 1, j + 1),
        }
    }
}

/// The coordinate superalgebra of `GL(m|n)`: the free supercommutative ring
/// on `x_ij` localized at `d1 = det(x_ij)_{i,j<m}` and
/// `d2 = det(x_ij)_{i,j>=m}`. Indices are zero-based throughout.
pub struct CoordinateRing {
    dim: SuperDim,
    poly: PolyRing,
    ring: LocalizedRing,
    inverse: OnceLock<SuperMatrix<LocalizedElement>>,
}

impl fmt::Debug for CoordinateRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoordinateRing")
            .field("dim", &self.dim)
            .finish()
    }
}

impl CoordinateRing {
    pub fn new(dim: SuperDim) -> Self {
        let t = dim.total();
        let poly = PolyRing::new(
            (0..t * t)
                .map(|v| dim.parity(v / t) + dim.parity(v % t))
                .collect(),
        );
        let var = |i: usize, j: usize| poly.var((i * t + j) as u32);
        let m = dim.m;
        let even_block: Vec<Vec<_>> = (0..m)
            .map(|i| (0..m).map(|j| var(i, j)).collect())
            .collect();
        let odd_block: Vec<Vec<_>> = (m..t)
            .map(|i| (m..t).map(|j| var(i, j)).collect())
            .collect();
        let d1 = determinant(&poly, &even_block);
        let d2 = determinant(&poly, &odd_block);
        let ring = LocalizedRing::new(d1, d2);
        Self {
            dim,
            poly,
            ring,
            inverse: OnceLock::new(),
        }
    }

    pub fn dim(&self) -> SuperDim {
        self.dim
    }

    pub fn ring(&self) -> &LocalizedRing {
        &self.ring
    }

    pub fn poly_ring(&self) -> &PolyRing {
        &self.poly
    }

    pub fn var_id(&self, i: usize, j: usize) -> u32 {
        let t = self.dim.total();
        assert!(i < t && j < t, "generator index out of range");
        (i * t + j) as u32
    }

    pub fn generator_parity(&self, i: usize, j: usize) -> Parity {
        self.dim.parity(i) + self.dim.parity(j)
    }

    pub fn x(&self, i: usize, j: usize) -> SuperPolynomial {
        self.poly.var(self.var_id(i, j))
    }

    pub fn d1(&self) -> &SuperPolynomial {
        self.ring.d1()
    }

    pub fn d2(&self) -> &SuperPolynomial {
        self.ring.d2()
    }

    pub fn generic_matrix(&self) -> SuperMatrix<LocalizedElement> {
        SuperMatrix::from_fn(self.dim, |i, j| LocalizedElement::from_poly(self.x(i, j)))
    }

    /// Inverse of the generic matrix by the block formula; computed once.
    pub fn generic_inverse(&self) -> &SuperMatrix<LocalizedElement> {
        self.inverse.get_or_init(|| {
            block_invert(&self.ring, &self.generic_matrix())
                .expect("the generic matrix is invertible")
        })
    }

    pub fn x_tilde(&self, i: usize, j: usize) -> &LocalizedElement {
        self.generic_inverse().get(i, j)
    }

    pub fn generator(&self, g: Generator) -> LocalizedElement {
        match g {
            Generator::X(i, j) => LocalizedElement::from_poly(self.x(i, j)),
            Generator::XTilde(i, j) => self.x_tilde(i, j).clone(),
        }
    }

    /// `Ber(D)/Ber(X)` when `row` is even and `Ber*(D)/Ber*(X)` when it is
    /// odd, where `D` is the generic matrix `X` with row `row` replaced by
    /// the unit row `e_col`. This ratio is the `(col, row)` entry of `X^{-1}`.
    pub fn cramer_ratio(&self, row: usize, col: usize) -> Result<LocalizedElement> {
        let t = self.dim.total();
        if row >= t || col >= t {
            return Err(Error::IndexOutOfRange {
                index: row.max(col),
                max: t,
            });
        }
        let x = self.generic_matrix();
        let mut d = x.clone();
        for c in 0..t {
            d.set(
                row,
                c,
                if c == col {
                    self.ring.one()
                } else {
                    self.ring.zero()
                },
            );
        }
        let (num, den) = if self.dim.parity(row) == Parity::Even {
            (berezinian(&self.ring, &d)?, berezinian(&self.ring, &x)?)
        } else {
            (
                berezinian_star(&self.ring, &d)?,
                berezinian_star(&self.ring, &x)?,
            )
        };
        let den_inv = self
            .ring
            .try_invert(&den)
            .ok_or_else(|| Error::NotInvertible {
                what: "Berezinian of the generic matrix".into(),
            })?;
        Ok(self.ring.mul(&num, &den_inv))
    }

    /// The `(i, j)` entry of `X^{-1}` by the super Cramer rule.
    pub fn cramer_entry(&self, i: usize, j: usize) -> Result<LocalizedElement> {
        self.cramer_ratio(j, i)
    }

    pub fn counit_poly(&self, p: &SuperPolynomial) -> Q {
        let t = self.dim.total() as u32;
        p.evaluate(|v| if v / t == v % t { Q::ONE } else { Q::ZERO })
    }

    /// Evaluation at the identity matrix.
    pub fn counit(&self, x: &LocalizedElement) -> Q {
        let num = self.counit_poly(&x.numerator);
        let den = self.counit_poly(&self.ring.denominator(x.a, x.b));
        num / den
    }

    /// `sum_k x_ik x~_kj`, or `sum_k x~_ik x_kj` when `tilde_first`.
    pub fn inverse_product_entry(&self, i: usize, j: usize, tilde_first: bool) -> LocalizedElement {
        let mut acc = self.ring.zero();
        for k in 0..self.dim.total() {
            let x = LocalizedElement::from_poly(self.x(
                if tilde_first { k } else { i },
                if tilde_first { j } else { k },
            ));
            let term = if tilde_first {
                self.ring.mul(self.x_tilde(i, k), &x)
            } else {
                self.ring.mul(&x, self.x_tilde(k, j))
            };
            acc = self.ring.add(&acc, &term);
        }
        acc
    }

    /// First `(i, j)` where a product of the generic matrix with its inverse
    /// differs from the identity.
    pub fn inverse_identity_failure(&self) -> Option<IdentityFailure> {
        let t = self.dim.total();
        for i in 0..t {
            for j in 0..t {
                let delta = if i == j {
                    self.ring.one()
                } else {
                    self.ring.zero()
                };
                for tilde_first in [false, true] {
                    let entry = self.inverse_product_entry(i, j, tilde_first);
                    if !self.ring.equal(&entry, &delta) {
                        let name = if tilde_first {
                            "sum_k x~_ik x_kj"
                        } else {
                            "sum_k x_ik x~_kj"
                        };
                        return Some(IdentityFailure::new(
                            name,
                            i,
                            j,
                            self.ring.sub(&entry, &delta),
                        ));
                    }
                }
            }
        }
        None
    }

    /// Both products of the generic matrix with its inverse are the identity.
    pub fn verify_inverse_identities(&self) -> bool {
        self.inverse_identity_failure().is_none()
    }

    pub fn cramer_failure(&self) -> Result<Option<IdentityFailure>> {
        let t = self.dim.total();
        for i in 0..t {
            for j in 0..t {
                let c = self.cramer_entry(i, j)?;
                if !self.ring.equal(&c, self.x_tilde(i, j)) {
                    return Ok(Some(IdentityFailure::new(
                        "cramer",
                        i,
                        j,
                        self.ring.sub(&c, self.x_tilde(i, j)),
                    )));
                }
            }
        }
        Ok(None)
    }

    /// Every Cramer entry agrees with the block inverse.
    pub fn verify_cramer(&self) -> Result<bool> {
        Ok(self.cramer_failure()?.is_none())
    }

    /// `sum_k x_ik (x) x_kj`.
    pub fn delta_generator(&self, i: usize, j: usize) -> TensorSquareElement {
        let mut acc = TensorSquareElement::zero();
        for k in 0..self.dim.total() {
            let term = TensorSquareElement::pure(
                &LocalizedElement::from_poly(self.x(i, k)),
                &LocalizedElement::from_poly(self.x(k, j)),
            );
            acc = acc.add(&self.ring, &term);
        }
        acc
    }

    fn inverse_coproduct_sign(&self, i: usize, k: usize, j: usize) -> Q {
        let p = (self.dim.parity(i) + self.dim.parity(k)).bit()
            * (self.dim.parity(k) + self.dim.parity(j)).bit();
        sign_pow(p)
    }

    /// `C_ij = sum_k (-1)^{(|i|+|k|)(|k|+|j|)} x~_kj (x) x~_ik`.
    pub fn delta_inverse_formula(&self, i: usize, j: usize) -> TensorSquareElement {
        let mut acc = TensorSquareElement::zero();
        for k in 0..self.dim.total() {
            let term = TensorSquareElement::pure(self.x_tilde(k, j), self.x_tilde(i, k))
                .scaled(&self.inverse_coproduct_sign(i, k, j));
            acc = acc.add(&self.ring, &term);
        }
        acc
    }

    /// First entry where `A C` or `C A` differs from the identity, for
    /// `A = (Delta(x_ij))` and `C = (C_ij)` in the matrix ring over the tensor
    /// square.
    pub fn delta_inverse_failure(&self) -> Option<IdentityFailure> {
        let x = |i, j| LocalizedElement::from_poly(self.x(i, j));
        self.delta_inverse_check(&x, &|i, j| self.x_tilde(i, j).clone())
    }

    /// [`Self::delta_inverse_failure`] after substituting `values[v]` for each
    /// even generator `v` on both tensor factors. This maps into the tensor
    /// square of the Grassmann algebra on the odd generators, so the check is
    /// exact at the point and small enough to run when the symbolic one is
    /// not.
    pub fn delta_inverse_failure_at(&self, values: &[Q]) -> Result<Option<IdentityFailure>> {
        let value = |v: u32| values[v as usize].clone();
        let t = self.dim.total() as u32;
        let even_value = |v: u32| {
            if self
                .generator_parity((v / t) as usize, (v % t) as usize)
                .is_odd()
            {
                Q::ZERO
            } else {
                value(v)
            }
        };
        let d1 = self.d1().evaluate(even_value);
        let d2 = self.d2().evaluate(even_value);
        if d1 == 0u32 || d2 == 0u32 {
            return Err(Error::NotInvertible {
                what: "d1 d2 at the evaluation point".into(),
            });
        }
        let eval = |e: &LocalizedElement| {
            let mut scale = Q::ONE;
            for _ in 0..e.a {
                scale /= &d1;
            }
            for _ in 0..e.b {
                scale /= &d2;
            }
            LocalizedElement::from_poly(e.numerator.substitute_even(value).scaled(&scale))
        };
        let x = |i, j| eval(&LocalizedElement::from_poly(self.x(i, j)));
        Ok(self.delta_inverse_check(&x, &|i, j| eval(self.x_tilde(i, j))))
    }

    /// [`Self::delta_inverse_failure_at`] on `points` random points with
    /// even generators drawn from `-50..=50`.
    pub fn delta_inverse_failure_random(
        &self,
        points: usize,
        seed: u64,
    ) -> Result<Option<IdentityFailure>> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let vars = self.poly.num_vars();
        let mut done = 0;
        while done < points {
            let values: Vec<Q> = (0..vars)
                .map(|_| Q::from(rng.gen_range(-50i64..=50)))
                .collect();
            match self.delta_inverse_failure_at(&values) {
                Ok(None) => done += 1,
                Ok(Some(f)) => return Ok(Some(f)),
                Err(Error::NotInvertible { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
        Ok(None)
    }

    fn delta_inverse_check(
        &self,
        x: &dyn Fn(usize, usize) -> LocalizedElement,
        x_tilde: &dyn Fn(usize, usize) -> LocalizedElement,
    ) -> Option<IdentityFailure> {
        let t = self.dim.total();
        let xs: Vec<Vec<_>> = (0..t).map(|i| (0..t).map(|j| x(i, j)).collect()).collect();
        let xts: Vec<Vec<_>> = (0..t)
            .map(|i| (0..t).map(|j| x_tilde(i, j)).collect())
            .collect();
        let a: Vec<Vec<_>> = (0..t)
            .map(|i| {
                (0..t)
                    .map(|j| {
                        (0..t).fold(TensorSquareElement::zero(), |acc, k| {
                            acc.add(&self.ring, &TensorSquareElement::pure(&xs[i][k], &xs[k][j]))
                        })
                    })
                    .collect()
            })
            .collect();
        let c: Vec<Vec<_>> = (0..t)
            .map(|i| {
                (0..t)
                    .map(|j| {
                        (0..t).fold(TensorSquareElement::zero(), |acc, k| {
                            let term = TensorSquareElement::pure(&xts[k][j], &xts[i][k])
                                .scaled(&self.inverse_coproduct_sign(i, k, j));
                            acc.add(&self.ring, &term)
                        })
                    })
                    .collect()
            })
            .collect();
        let one = TensorSquareElement::one();
        for (name, left, right) in [("A C", &a, &c), ("C A", &c, &a)] {
            for i in 0..t {
                for j in 0..t {
                    let mut acc = TensorSquareElement::zero();
                    for k in 0..t {
                        acc = acc.add(&self.ring, &left[i][k].mul(&right[k][j]));
                    }
                    let diff = if i == j {
                        acc.sub(&self.ring, &one)
                    } else {
                        acc
                    };
                    if !diff.is_zero() {
                        return Some(IdentityFailure {
                            identity: name.to_string(),
                            location: format!("({i},{j})"),
                            difference: format!("{diff:?}"),
                        });
                    }
                }
            }
        }
        None
    }

    pub fn verify_delta_inverse(&self) -> bool {
        self.delta_inverse_failure().is_none()
    }

    /// Comultiplication of a generator as a formal tensor of generators.
    /// On `x~` it uses the formula certified by [`Self::verify_delta_inverse`].
    pub fn formal_delta(&self, g: Generator) -> FormalTensor {
        let t = self.dim.total();
        let mut terms = BTreeMap::new();
        for k in 0..t {
            match g {
                Generator::X(i, j) => {
                    terms.insert(vec![Generator::X(i, k), Generator::X(k, j)], Q::ONE);
                }
                Generator::XTilde(i, j) => {
                    terms.insert(
                        vec![Generator::XTilde(k, j), Generator::XTilde(i, k)],
                        self.inverse_coproduct_sign(i, k, j),
                    );
                }
            }
        }
        FormalTensor::from_terms(terms)
    }

    pub fn generators(&self) -> Vec<Generator> {
        let t = self.dim.total();
        let mut out = Vec::with_capacity(2 * t * t);
        for i in 0..t {
            for j in 0..t {
                out.push(Generator::X(i, j));
                out.push(Generator::XTilde(i, j));
            }
        }
        out
    }

    /// `(Delta (x) id) Delta = (id (x) Delta) Delta` on every generator.
    pub fn verify_coassociativity(&self) -> bool {
        self.generators().into_iter().all(|g| {
            let d = self.formal_delta(g);
            let left = d.apply_at(0, |h| self.formal_delta(h));
            let right = d.apply_at(1, |h| self.formal_delta(h));
            left == right
        })
    }

    /// `(eps (x) id) Delta = id = (id (x) eps) Delta` on every generator.
    pub fn verify_counit_laws(&self) -> bool {
        let eps = |h: Generator| self.counit(&self.generator(h));
        self.generators().into_iter().all(|g| {
            let d = self.formal_delta(g);
            let expected = FormalTensor::generator(g);
            d.contract_at(0, eps) == expected && d.contract_at(1, eps) == expected
        })
    }

    pub fn inverse_counit_failure(&self) -> Option<IdentityFailure> {
        let t = self.dim.total();
        for i in 0..t {
            for j in 0..t {
                let value = self.counit(self.x_tilde(i, j));
                let expected = if i == j { Q::ONE } else { Q::ZERO };
                if value != expected {
                    return Some(IdentityFailure {
                        identity: "eps(x~_ij) = delta_ij".to_string(),
                        location: format!("({i},{j})"),
                        difference: (value - expected).to_string(),
                    });
                }
            }
        }
        None
    }

    /// `eps(x~_ij) = delta_ij` on the actual localized entries.
    pub fn verify_inverse_counit(&self) -> bool {
        self.inverse_counit_failure().is_none()
    }

    /// Sign of `f(x_ij) = (-1)^{|j|(|i|+|j|)} x_ij`.
    pub fn twist_sign(&self, i: usize, j: usize) -> Q {
        sign_pow(self.dim.parity(j).bit() * self.generator_parity(i, j).bit())
    }

    /// `(f (x) f) Delta = Delta' f` on every `x_ij`, where
    /// `Delta'(x_ij) = sum_h (-1)^{(|i|+|h|)(|h|+|j|)} x_ih (x) x_hj`.
    pub fn twist_isomorphism_check(&self) -> bool {
        let t = self.dim.total();
        (0..t).all(|i| {
            (0..t).all(|j| {
                let f = |g: Generator| match g {
                    Generator::X(a, b) => self.twist_sign(a, b),
                    Generator::XTilde(..) => unreachable!(),
                };
                let lhs = self.formal_delta(Generator::X(i, j)).rescale(f);
                let mut rhs = BTreeMap::new();
                for h in 0..t {
                    rhs.insert(
                        vec![Generator::X(i, h), Generator::X(h, j)],
                        self.inverse_coproduct_sign(i, h, j) * self.twist_sign(i, j),
                    );
                }
                lhs == FormalTensor::from_terms(rhs)
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn one_by_one_inverse_is_reciprocal() {
        let c = CoordinateRing::new(SuperDim::new(1, 0));
        let xt = c.x_tilde(0, 0);
        assert_eq!(xt.numerator, SuperPolynomial::one());
        assert_eq!((xt.a, xt.b), (1, 0));
        let cr = c.cramer_entry(0, 0).unwrap();
        assert!(c.ring().equal(&cr, xt));
    }

    #[test]
    fn purely_odd_one_by_one() {
        let c = CoordinateRing::new(SuperDim::new(0, 1));
        assert_eq!((c.x_tilde(0, 0).a, c.x_tilde(0, 0).b), (0, 1));
        assert!(c.verify_inverse_identities());
        assert!(c.verify_cramer().unwrap());
    }

    #[test]
    fn determinants_of_diagonal_blocks() {
        let c = CoordinateRing::new(SuperDim::new(2, 1));
        let expected = &(&c.x(0, 0) * &c.x(1, 1)) - &(&c.x(0, 1) * &c.x(1, 0));
        assert_eq!(c.d1(), &expected);
        assert_eq!(c.d2(), &c.x(2, 2));
        assert_eq!(c.counit_poly(c.d1()), q(1));
    }

    #[test]
    fn cramer_index_order() {
        // the ratio with row j replaced by e_i is the (i, j) entry, not (j, i)
        let c = CoordinateRing::new(SuperDim::new(2, 0));
        let r = c.ring();
        assert!(r.equal(&c.cramer_ratio(1, 0).unwrap(), c.x_tilde(0, 1)));
        assert!(!r.equal(&c.cramer_ratio(0, 1).unwrap(), c.x_tilde(0, 1)));
    }

    #[test]
    fn out_of_range_cramer_is_an_error() {
        let c = CoordinateRing::new(SuperDim::new(1, 1));
        assert!(matches!(
            c.cramer_entry(2, 0),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn single_even_coproduct() {
        let c = CoordinateRing::new(SuperDim::new(1, 0));
        let d = c.delta_generator(0, 0);
        let expected = TensorSquareElement::pure(
            &LocalizedElement::from_poly(c.x(0, 0)),
            &LocalizedElement::from_poly(c.x(0, 0)),
        );
        assert!(d.equal(c.ring(), &expected));
        assert!(c.verify_delta_inverse());
    }

    #[test]
    fn hopf_laws_at_one_one() {
        let c = CoordinateRing::new(SuperDim::new(1, 1));
        assert!(c.verify_coassociativity());
        assert!(c.verify_counit_laws());
        assert!(c.verify_inverse_counit());
        assert!(c.twist_isomorphism_check());
    }
}
