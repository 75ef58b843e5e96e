use std::collections::BTreeMap;

use super::coordinate::Generator;
use super::{LocalizedElement, LocalizedRing, Monomial, SuperPolynomial};
use crate::rational::{One, Zero, Q};

/// Element of the tensor square of a localized ring, stored as a sum of
/// `m1 (x) m2` over monomial pairs with one denominator `d1^a d2^b` per side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorSquareElement {
    terms: BTreeMap<(Monomial, Monomial), Q>,
    left: (u32, u32),
    right: (u32, u32),
}

impl TensorSquareElement {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
            left: (0, 0),
            right: (0, 0),
        }
    }

    pub fn one() -> Self {
        Self::pure(
            &LocalizedElement::from_poly(SuperPolynomial::one()),
            &LocalizedElement::from_poly(SuperPolynomial::one()),
        )
    }

    /// `x (x) y`.
    pub fn pure(x: &LocalizedElement, y: &LocalizedElement) -> Self {
        let mut terms = BTreeMap::new();
        for (ml, cl) in x.numerator.terms() {
            for (mr, cr) in y.numerator.terms() {
                terms.insert((ml.clone(), mr.clone()), cl * cr);
            }
        }
        Self {
            terms,
            left: (x.a, x.b),
            right: (y.a, y.b),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn scaled(&self, c: &Q) -> Self {
        if *c == 0u32 {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
            left: self.left,
            right: self.right,
        }
    }

    /// Rewrites both sides over the larger denominators.
    fn raised(&self, ring: &LocalizedRing, left: (u32, u32), right: (u32, u32)) -> Self {
        if self.is_zero() {
            return Self {
                terms: BTreeMap::new(),
                left,
                right,
            };
        }
        let lf = ring.denominator(left.0 - self.left.0, left.1 - self.left.1);
        let rf = ring.denominator(right.0 - self.right.0, right.1 - self.right.1);
        let mut terms: BTreeMap<(Monomial, Monomial), Q> = BTreeMap::new();
        for ((ml, mr), c) in &self.terms {
            for (fl, cl) in lf.terms() {
                // the factors are even, so no sign arises
                let (nl, _) = ml.mul(fl).expect("denominators are free of odd variables");
                for (fr, cr) in rf.terms() {
                    let (nr, _) = mr.mul(fr).expect("denominators are free of odd variables");
                    *terms.entry((nl.clone(), nr)).or_insert(Q::ZERO) += c * cl * cr;
                }
            }
        }
        terms.retain(|_, c| *c != 0u32);
        Self { terms, left, right }
    }

    pub fn add(&self, ring: &LocalizedRing, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let left = (self.left.0.max(other.left.0), self.left.1.max(other.left.1));
        let right = (
            self.right.0.max(other.right.0),
            self.right.1.max(other.right.1),
        );
        let mut acc = self.raised(ring, left, right);
        for (k, c) in other.raised(ring, left, right).terms {
            let slot = acc.terms.entry(k.clone()).or_insert(Q::ZERO);
            *slot += c;
            if *slot == 0u32 {
                acc.terms.remove(&k);
            }
        }
        acc
    }

    pub fn sub(&self, ring: &LocalizedRing, other: &Self) -> Self {
        self.add(ring, &other.scaled(&-Q::ONE))
    }

    /// `(x (x) y)(w (x) z) = (-1)^{|y||w|} xw (x) yz`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<(Monomial, Monomial), Q> = BTreeMap::new();
        for ((x, y), c1) in &self.terms {
            for ((w, z), c2) in &other.terms {
                let Some((xw, s1)) = x.mul(w) else { continue };
                let Some((yz, s2)) = y.mul(z) else { continue };
                let s3 = y.parity().is_odd() && w.parity().is_odd();
                let c = c1 * c2;
                let slot = terms.entry((xw, yz)).or_insert(Q::ZERO);
                if s1 ^ s2 ^ s3 {
                    *slot -= c;
                } else {
                    *slot += c;
                }
            }
        }
        terms.retain(|_, c| *c != 0u32);
        if terms.is_empty() {
            return Self::zero();
        }
        Self {
            terms,
            left: (self.left.0 + other.left.0, self.left.1 + other.left.1),
            right: (self.right.0 + other.right.0, self.right.1 + other.right.1),
        }
    }

    pub fn equal(&self, ring: &LocalizedRing, other: &Self) -> bool {
        self.sub(ring, other).is_zero()
    }
}

/// Formal linear combination of tensor words in generator symbols, used to
/// check coalgebra laws without expanding into polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FormalTensor {
    terms: BTreeMap<Vec<Generator>, Q>,
}

impl FormalTensor {
    pub fn from_terms(terms: BTreeMap<Vec<Generator>, Q>) -> Self {
        let mut terms = terms;
        terms.retain(|_, c| *c != 0u32);
        Self { terms }
    }

    pub fn generator(g: Generator) -> Self {
        Self::from_terms(BTreeMap::from([(vec![g], Q::ONE)]))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Generator>, &Q)> {
        self.terms.iter()
    }

    /// Replaces the factor at `slot` by its image under `f`. The map is
    /// assumed even, so no Koszul sign appears.
    pub fn apply_at(&self, slot: usize, f: impl Fn(Generator) -> FormalTensor) -> Self {
        let mut out: BTreeMap<Vec<Generator>, Q> = BTreeMap::new();
        for (word, c) in &self.terms {
            for (image, c2) in f(word[slot]).terms {
                let mut w = word[..slot].to_vec();
                w.extend(image);
                w.extend_from_slice(&word[slot + 1..]);
                *out.entry(w).or_insert(Q::ZERO) += c * &c2;
            }
        }
        Self::from_terms(out)
    }

    /// Applies a scalar-valued even map at `slot`, removing that factor.
    pub fn contract_at(&self, slot: usize, f: impl Fn(Generator) -> Q) -> Self {
        let mut out: BTreeMap<Vec<Generator>, Q> = BTreeMap::new();
        for (word, c) in &self.terms {
            let mut w = word.clone();
            let g = w.remove(slot);
            *out.entry(w).or_insert(Q::ZERO) += c * f(g);
        }
        Self::from_terms(out)
    }

    /// Applies `g -> f(g) g` to every factor.
    pub fn rescale(&self, f: impl Fn(Generator) -> Q) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|(w, c)| (w.clone(), w.iter().fold(c.clone(), |acc, &g| acc * f(g))))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superlinalg::Parity;

    #[test]
    fn odd_factors_pick_up_koszul_sign() {
        let ring = LocalizedRing::new(SuperPolynomial::one(), SuperPolynomial::one());
        let a = LocalizedElement::from_poly(SuperPolynomial::var(0, Parity::Odd));
        let b = LocalizedElement::from_poly(SuperPolynomial::var(1, Parity::Odd));
        let one = LocalizedElement::from_poly(SuperPolynomial::one());
        // (1 (x) a)(b (x) 1) = -(b (x) a)
        let lhs = TensorSquareElement::pure(&one, &a).mul(&TensorSquareElement::pure(&b, &one));
        let rhs = TensorSquareElement::pure(&b, &a).scaled(&-Q::ONE);
        assert!(lhs.equal(&ring, &rhs));
        // (a (x) 1)(b (x) 1) = ab (x) 1
        let lhs = TensorSquareElement::pure(&a, &one).mul(&TensorSquareElement::pure(&b, &one));
        let ab = LocalizedElement::from_poly(&a.numerator * &b.numerator);
        assert!(lhs.equal(&ring, &TensorSquareElement::pure(&ab, &one)));
    }
}
