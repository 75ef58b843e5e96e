//! Exact computational algebra for the general linear supergroup.
//!
//! The crate builds, over the rationals:
//!
//! * supermatrices over supercommutative rings, with supertranspose, parity
//!   flip, Berezinian and block inversion ([`superlinalg`]);
//! * the free supercommutative coordinate ring on an `(m+n)x(m+n)` generic
//!   matrix, its localization at the two block determinants, the inverse
//!   entries, and the bialgebra structure maps ([`superpoly`]);
//! * the representation of `gl(m|n)` on mixed tensor space
//!   `V^{(x)r} (x) W^{(x)s}` ([`liealg`]) and the walled Brauer algebra acting
//!   on the same space ([`brauer`]);
//! * exact commutants, radicals and centers of matrix algebras
//!   ([`centralizer`]), and the bipartition combinatorics that label the
//!   blocks ([`combinatorics`]).

#![allow(clippy::needless_range_loop)]

pub mod brauer;
pub mod centralizer;
pub mod combinatorics;
mod error;
pub mod liealg;
pub mod rational;
pub mod sparse;
pub mod superlinalg;
pub mod superpoly;

pub use error::{Error, Result};
