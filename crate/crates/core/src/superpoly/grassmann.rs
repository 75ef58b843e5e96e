use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Monomial, PolyRing, SuperPolynomial};
use crate::rational::q;
use crate::superlinalg::{
    berezinian, berezinian_star, determinant, mat_mul, Parity, Rationals, SuperDim, SuperMatrix,
    SuperRing,
};
use crate::Result;

fn odd_monomial(vars: &[u32]) -> Monomial {
    vars.iter().fold(Monomial::one(), |acc, &v| {
        acc.mul(&Monomial::odd_var(v))
            .expect("distinct variables")
            .0
    })
}

/// Random homogeneous element of the Grassmann algebra on `k` generators
/// with small integer coefficients.
pub fn random_grassmann_element(k: usize, parity: Parity, rng: &mut impl Rng) -> SuperPolynomial {
    let mut terms = Vec::new();
    for size in (0..=k).filter(|s| Parity::from_bit(*s) == parity) {
        for vars in (0..k as u32).combinations(size) {
            let c: i64 = if size == 0 {
                rng.gen_range(-5..=5)
            } else {
                rng.gen_range(-3..=3)
            };
            terms.push((odd_monomial(&vars), q(c)));
        }
    }
    SuperPolynomial::from_terms(terms)
}

/// Random even supermatrix over the Grassmann algebra on `k` generators
/// whose diagonal blocks have invertible bodies.
pub fn random_even_supermatrix(
    dim: SuperDim,
    k: usize,
    rng: &mut impl Rng,
) -> SuperMatrix<SuperPolynomial> {
    loop {
        let a = SuperMatrix::from_fn(dim, |i, j| {
            random_grassmann_element(k, dim.parity(i) + dim.parity(j), rng)
        });
        let body = a.map(|x| {
            x.body()
                .as_constant()
                .expect("odd-free part of a Grassmann element is a constant")
        });
        let (t1, _, _, t4) = body.blocks();
        if determinant(&Rationals, &t1) != 0u32 && determinant(&Rationals, &t4) != 0u32 {
            return a;
        }
    }
}

/// Outcome of the Berezinian law checks on seeded random samples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BerezinianLaws {
    pub samples: usize,
    pub ber_multiplicative: usize,
    pub star_multiplicative: usize,
    pub ber_times_star_is_one: usize,
}

impl BerezinianLaws {
    pub fn all_hold(&self) -> bool {
        self.ber_multiplicative == self.samples
            && self.star_multiplicative == self.samples
            && self.ber_times_star_is_one == self.samples
    }
}

/// Checks `Ber(ST) = Ber(S)Ber(T)`, the same for `Ber*`, and
/// `Ber(S)Ber*(S) = 1` on `samples` pairs over the Grassmann algebra on
/// `k` generators.
pub fn check_berezinian_laws(
    dim: SuperDim,
    k: usize,
    samples: usize,
    seed: u64,
) -> Result<BerezinianLaws> {
    let ring = PolyRing::grassmann(k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = BerezinianLaws {
        samples,
        ber_multiplicative: 0,
        star_multiplicative: 0,
        ber_times_star_is_one: 0,
    };
    for _ in 0..samples {
        let s = random_even_supermatrix(dim, k, &mut rng);
        let t = random_even_supermatrix(dim, k, &mut rng);
        let st = mat_mul(&ring, &s, &t);
        let (bs, bt, bst) = (
            berezinian(&ring, &s)?,
            berezinian(&ring, &t)?,
            berezinian(&ring, &st)?,
        );
        if ring.equal(&bst, &ring.mul(&bs, &bt)) {
            out.ber_multiplicative += 1;
        }
        let (ss, st_, sst) = (
            berezinian_star(&ring, &s)?,
            berezinian_star(&ring, &t)?,
            berezinian_star(&ring, &st)?,
        );
        if ring.equal(&sst, &ring.mul(&ss, &st_)) {
            out.star_multiplicative += 1;
        }
        if ring.equal(&ring.mul(&bs, &ss), &ring.one()) {
            out.ber_times_star_is_one += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_even_and_seeded() {
        let dim = SuperDim::new(1, 1);
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        let x = random_even_supermatrix(dim, 4, &mut a);
        assert_eq!(x, random_even_supermatrix(dim, 4, &mut b));
        assert!(crate::superlinalg::is_even(&PolyRing::grassmann(4), &x));
    }

    #[test]
    fn laws_hold_on_a_few_samples() {
        let r = check_berezinian_laws(SuperDim::new(1, 1), 4, 5, 1).unwrap();
        assert!(r.all_hold(), "{r:?}");
    }
}
