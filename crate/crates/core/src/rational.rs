//! Exact rational scalars.
//!
//! Everything in this crate is computed over the rationals. The scalar type
//! is malachite's `Rational`, which keeps small values inline and is an order
//! of magnitude faster than a boxed bignum rational on the small integers
//! that dominate these computations.

use std::str::FromStr;

pub use malachite_base::num::basic::traits::{NegativeOne, One, Zero};
pub use malachite_q::Rational;

/// The scalar field.
pub type Q = Rational;

/// Shorthand for an integer-valued rational.
#[inline]
pub fn q(v: i64) -> Q {
    Q::from(v)
}

/// `num / den` as an exact rational. Panics if `den == 0`.
pub fn frac(num: i64, den: i64) -> Q {
    assert!(den != 0, "zero denominator");
    Q::from_signeds(num, den)
}

/// `(-1)^exponent`.
#[inline]
pub fn sign_pow(exponent: usize) -> Q {
    if exponent.is_multiple_of(2) {
        Q::ONE
    } else {
        Q::NEGATIVE_ONE
    }
}

/// Numerator and denominator as decimal strings; the denominator is positive
/// and the pair is in lowest terms.
pub fn to_decimal_pair(x: &Q) -> (String, String) {
    let (num, den) = x.to_numerator_and_denominator();
    let sign = if *x < 0u32 { "-" } else { "" };
    (format!("{sign}{num}"), den.to_string())
}

/// Inverse of [`to_decimal_pair`].
pub fn from_decimal_pair(num: &str, den: &str) -> Option<Q> {
    let value = Q::from_str(&format!("{num}/{den}")).ok()?;
    Some(value)
}
