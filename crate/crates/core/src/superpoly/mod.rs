//! Free supercommutative polynomial rings over the rationals and their
//! localization at a pair of even central elements.
//!
//! Variables are numbered by `u32`; a monomial stores the exponents of its
//! even variables and the strictly increasing list of its odd variables.
//! All signs are normalized against that increasing order, so two
//! polynomials are equal iff their term maps are equal.

mod bidegree;
mod coordinate;
mod grassmann;
mod tensor;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Mutex;

use crate::rational::{One, Zero, Q};
use crate::superlinalg::{Parity, SuperRing};

pub use bidegree::{
    bidegree_dimension, bidegree_span, span_inclusion, BidegreeSpan, DEFAULT_SPAN_LIMIT,
};
pub use coordinate::{CoordinateRing, Generator, IdentityFailure};
pub use grassmann::{
    check_berezinian_laws, random_even_supermatrix, random_grassmann_element, BerezinianLaws,
};
pub use tensor::{FormalTensor, TensorSquareElement};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    even: Vec<(u32, u32)>,
    odd: Vec<u32>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn even_var(v: u32) -> Self {
        Self {
            even: vec![(v, 1)],
            odd: Vec::new(),
        }
    }

    pub fn odd_var(v: u32) -> Self {
        Self {
            even: Vec::new(),
            odd: vec![v],
        }
    }

    pub fn is_one(&self) -> bool {
        self.even.is_empty() && self.odd.is_empty()
    }

    pub fn even_exponents(&self) -> &[(u32, u32)] {
        &self.even
    }

    pub fn odd_factors(&self) -> &[u32] {
        &self.odd
    }

    pub fn degree(&self) -> u32 {
        self.even.iter().map(|(_, e)| e).sum::<u32>() + self.odd.len() as u32
    }

    pub fn parity(&self) -> Parity {
        Parity::from_bit(self.odd.len())
    }

    /// Product in normal order together with its sign, or `None` when an odd
    /// variable repeats.
    pub fn mul(&self, other: &Self) -> Option<(Self, bool)> {
        let mut odd = Vec::with_capacity(self.odd.len() + other.odd.len());
        let mut swaps = 0usize;
        let (mut i, mut j) = (0, 0);
        while i < self.odd.len() || j < other.odd.len() {
            if j == other.odd.len() || (i < self.odd.len() && self.odd[i] < other.odd[j]) {
                odd.push(self.odd[i]);
                i += 1;
            } else if i == self.odd.len() || other.odd[j] < self.odd[i] {
                // other.odd[j] jumps over the remaining factors of self
                swaps += self.odd.len() - i;
                odd.push(other.odd[j]);
                j += 1;
            } else {
                return None;
            }
        }
        let mut even = Vec::with_capacity(self.even.len() + other.even.len());
        let (mut i, mut j) = (0, 0);
        while i < self.even.len() || j < other.even.len() {
            if j == other.even.len() || (i < self.even.len() && self.even[i].0 < other.even[j].0) {
                even.push(self.even[i]);
                i += 1;
            } else if i == self.even.len() || other.even[j].0 < self.even[i].0 {
                even.push(other.even[j]);
                j += 1;
            } else {
                even.push((self.even[i].0, self.even[i].1 + other.even[j].1));
                i += 1;
                j += 1;
            }
        }
        Some((Self { even, odd }, swaps % 2 == 1))
    }
}

/// Graded lex order on sparse exponent vectors, smaller variable ids first.
fn grlex(a: &[(u32, u32)], b: &[(u32, u32)]) -> Ordering {
    let deg = |e: &[(u32, u32)]| e.iter().map(|p| p.1).sum::<u32>();
    deg(a).cmp(&deg(b)).then_with(|| {
        for (x, y) in a.iter().zip(b) {
            if x.0 != y.0 {
                // the side with the smaller variable has the larger monomial
                return y.0.cmp(&x.0);
            }
            if x.1 != y.1 {
                return x.1.cmp(&y.1);
            }
        }
        a.len().cmp(&b.len())
    })
}

#[derive(Clone, PartialEq, Eq)]
struct Grlex(Vec<(u32, u32)>);

impl Ord for Grlex {
    fn cmp(&self, other: &Self) -> Ordering {
        grlex(&self.0, &other.0)
    }
}

impl PartialOrd for Grlex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn exponent_quotient(a: &[(u32, u32)], b: &[(u32, u32)]) -> Option<Vec<(u32, u32)>> {
    let mut out = Vec::with_capacity(a.len());
    let mut j = 0;
    for &(v, e) in a {
        if j < b.len() && b[j].0 < v {
            return None;
        }
        if j < b.len() && b[j].0 == v {
            if b[j].1 > e {
                return None;
            }
            if e > b[j].1 {
                out.push((v, e - b[j].1));
            }
            j += 1;
        } else {
            out.push((v, e));
        }
    }
    (j == b.len()).then_some(out)
}

fn exponent_product(a: &[(u32, u32)], b: &[(u32, u32)]) -> Vec<(u32, u32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push(b[j]);
            j += 1;
        } else {
            out.push((a[i].0, a[i].1 + b[j].1));
            i += 1;
            j += 1;
        }
    }
    out
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (v, e) in &self.even {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "v{v}")?;
            } else {
                write!(f, "v{v}^{e}")?;
            }
        }
        for v in &self.odd {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "v{v}")?;
        }
        Ok(())
    }
}

/// Element of a free supercommutative algebra with rational coefficients.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct SuperPolynomial {
    terms: BTreeMap<Monomial, Q>,
}

impl fmt::Debug for SuperPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SuperPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{c}")?;
            } else if *c == 1u32 {
                write!(f, "{m}")?;
            } else {
                write!(f, "({c})*{m}")?;
            }
        }
        Ok(())
    }
}

impl SuperPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::ONE)
    }

    pub fn constant(c: Q) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn term(m: Monomial, c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0u32 {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn var(v: u32, parity: Parity) -> Self {
        let m = match parity {
            Parity::Even => Monomial::even_var(v),
            Parity::Odd => Monomial::odd_var(v),
        };
        Self::term(m, Q::ONE)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Q)>) -> Self {
        let mut map: BTreeMap<Monomial, Q> = BTreeMap::new();
        for (m, c) in terms {
            *map.entry(m).or_insert(Q::ZERO) += c;
        }
        map.retain(|_, c| *c != 0u32);
        Self { terms: map }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or(Q::ZERO)
    }

    /// Parity when homogeneous; zero counts as even.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(Monomial::parity);
        let Some(first) = it.next() else {
            return Some(Parity::Even);
        };
        it.all(|p| p == first).then_some(first)
    }

    /// Terms without odd factors.
    pub fn body(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.odd.is_empty())
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Terms with at least one odd factor; always nilpotent.
    pub fn soul(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| !m.odd.is_empty())
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::ZERO),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn scaled(&self, c: &Q) -> Self {
        if *c == 0u32 {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Substitutes rational values for every variable. Odd variables must be
    /// sent to zero for this to be an algebra map; this is asserted.
    pub fn evaluate(&self, value: impl Fn(u32) -> Q) -> Q {
        let mut acc = Q::ZERO;
        for (m, c) in &self.terms {
            if m.odd.iter().any(|&v| value(v) != 0u32) {
                panic!("evaluation sends an odd variable to a nonzero scalar");
            }
            if !m.odd.is_empty() {
                continue;
            }
            let mut t = c.clone();
            for (v, e) in &m.even {
                let x = value(*v);
                for _ in 0..*e {
                    t *= &x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes rational values for the even variables only, leaving a
    /// polynomial in the odd variables. This is an algebra map.
    pub fn substitute_even(&self, value: impl Fn(u32) -> Q) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| {
            let mut t = c.clone();
            for (v, e) in &m.even {
                let x = value(*v);
                for _ in 0..*e {
                    t *= &x;
                }
            }
            let odd = Monomial {
                even: Vec::new(),
                odd: m.odd.clone(),
            };
            (odd, t)
        }))
    }

    /// Exact quotient by a polynomial free of odd variables, or `None` when it
    /// does not divide. Runs graded-lex long division separately on each
    /// odd part, which is valid because `d` commutes with everything.
    pub fn div_exact_even(&self, d: &SuperPolynomial) -> Option<SuperPolynomial> {
        assert!(
            d.terms.keys().all(|m| m.odd.is_empty()),
            "divisor has odd variables"
        );
        let (lead, lead_c) = d.terms.iter().max_by(|x, y| grlex(&x.0.even, &y.0.even))?;
        let mut groups: BTreeMap<Vec<u32>, BTreeMap<Grlex, Q>> = BTreeMap::new();
        for (m, c) in &self.terms {
            groups
                .entry(m.odd.clone())
                .or_default()
                .insert(Grlex(m.even.clone()), c.clone());
        }
        let mut quotient = BTreeMap::new();
        for (odd, mut rest) in groups {
            while let Some((Grlex(top), c)) = rest.pop_last() {
                let shift = exponent_quotient(&top, &lead.even)?;
                let qc = &c / lead_c;
                for (m, dc) in &d.terms {
                    if m == lead {
                        continue;
                    }
                    let key = Grlex(exponent_product(&shift, &m.even));
                    let slot = rest.entry(key.clone()).or_insert(Q::ZERO);
                    *slot -= &qc * dc;
                    if *slot == 0u32 {
                        rest.remove(&key);
                    }
                }
                quotient.insert(
                    Monomial {
                        even: shift,
                        odd: odd.clone(),
                    },
                    qc,
                );
            }
        }
        Some(Self { terms: quotient })
    }

    /// Rescales every variable `v` by `scale(v)` (an algebra automorphism
    /// when each scale is nonzero).
    pub fn rescale_vars(&self, scale: impl Fn(u32) -> Q) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| {
            let mut t = c.clone();
            for (v, e) in &m.even {
                let s = scale(*v);
                for _ in 0..*e {
                    t *= &s;
                }
            }
            for v in &m.odd {
                t *= scale(*v);
            }
            (m.clone(), t)
        }))
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut acc: HashMap<Monomial, Q> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, negative)) = ma.mul(mb) {
                    let c = ca * cb;
                    let slot = acc.entry(m).or_insert(Q::ZERO);
                    if negative {
                        *slot -= c;
                    } else {
                        *slot += c;
                    }
                }
            }
        }
        Self {
            terms: acc.into_iter().filter(|(_, c)| *c != 0u32).collect(),
        }
    }

    fn add_scaled(&self, other: &Self, c: &Q) -> Self {
        let mut terms = self.terms.clone();
        for (m, x) in &other.terms {
            let slot = terms.entry(m.clone()).or_insert(Q::ZERO);
            *slot += x * c;
            if *slot == 0u32 {
                terms.remove(m);
            }
        }
        Self { terms }
    }
}

impl Add for &SuperPolynomial {
    type Output = SuperPolynomial;
    fn add(self, rhs: Self) -> SuperPolynomial {
        self.add_scaled(rhs, &Q::ONE)
    }
}

impl Sub for &SuperPolynomial {
    type Output = SuperPolynomial;
    fn sub(self, rhs: Self) -> SuperPolynomial {
        self.add_scaled(rhs, &-Q::ONE)
    }
}

impl Mul for &SuperPolynomial {
    type Output = SuperPolynomial;
    fn mul(self, rhs: Self) -> SuperPolynomial {
        self.mul_impl(rhs)
    }
}

impl Neg for &SuperPolynomial {
    type Output = SuperPolynomial;
    fn neg(self) -> SuperPolynomial {
        self.scaled(&-Q::ONE)
    }
}

/// `1 / (c + s)` for a nonzero rational `c` and nilpotent `s`, as the
/// terminating series `sum_k (-1)^k s^k / c^{k+1}`.
fn invert_unit_plus_nilpotent(c: &Q, s: &SuperPolynomial) -> SuperPolynomial {
    let c_inv = Q::ONE / c;
    let step = s.scaled(&-c_inv.clone());
    let mut acc = SuperPolynomial::constant(c_inv.clone());
    let mut power = SuperPolynomial::one();
    loop {
        power = &power * &step;
        if power.is_zero() {
            return acc;
        }
        acc = &acc + &power.scaled(&c_inv);
    }
}

/// Free supercommutative algebra on variables of known parity. With only odd
/// variables this is the Grassmann algebra; its units are exactly the
/// elements with nonzero constant term.
#[derive(Clone, Debug)]
pub struct PolyRing {
    parities: Vec<Parity>,
}

impl PolyRing {
    pub fn new(parities: Vec<Parity>) -> Self {
        Self { parities }
    }

    /// Grassmann algebra on `k` odd generators.
    pub fn grassmann(k: usize) -> Self {
        Self::new(vec![Parity::Odd; k])
    }

    pub fn num_vars(&self) -> usize {
        self.parities.len()
    }

    pub fn var(&self, v: u32) -> SuperPolynomial {
        SuperPolynomial::var(v, self.parities[v as usize])
    }
}

impl SuperRing for PolyRing {
    type Elem = SuperPolynomial;

    fn zero(&self) -> SuperPolynomial {
        SuperPolynomial::zero()
    }
    fn one(&self) -> SuperPolynomial {
        SuperPolynomial::one()
    }
    fn from_rational(&self, c: &Q) -> SuperPolynomial {
        SuperPolynomial::constant(c.clone())
    }
    fn add(&self, a: &SuperPolynomial, b: &SuperPolynomial) -> SuperPolynomial {
        a + b
    }
    fn neg(&self, a: &SuperPolynomial) -> SuperPolynomial {
        -a
    }
    fn sub(&self, a: &SuperPolynomial, b: &SuperPolynomial) -> SuperPolynomial {
        a - b
    }
    fn mul(&self, a: &SuperPolynomial, b: &SuperPolynomial) -> SuperPolynomial {
        a * b
    }
    fn is_zero(&self, a: &SuperPolynomial) -> bool {
        a.is_zero()
    }
    fn equal(&self, a: &SuperPolynomial, b: &SuperPolynomial) -> bool {
        a == b
    }
    fn parity(&self, a: &SuperPolynomial) -> Option<Parity> {
        a.parity()
    }
    fn try_invert(&self, a: &SuperPolynomial) -> Option<SuperPolynomial> {
        let c = a.body().as_constant()?;
        if c == 0u32 {
            return None;
        }
        Some(invert_unit_plus_nilpotent(&c, &a.soul()))
    }
}

/// Fraction `numerator / (d1^a d2^b)` in the localization at two even
/// central non-zero-divisors `d1`, `d2`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LocalizedElement {
    pub numerator: SuperPolynomial,
    pub a: u32,
    pub b: u32,
}

impl fmt::Debug for LocalizedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / (d1^{} d2^{})", self.numerator, self.a, self.b)
    }
}

impl LocalizedElement {
    pub fn from_poly(p: SuperPolynomial) -> Self {
        Self {
            numerator: p,
            a: 0,
            b: 0,
        }
    }

    pub fn new(numerator: SuperPolynomial, a: u32, b: u32) -> Self {
        Self { numerator, a, b }
    }
}

/// The localization of a polynomial ring at the declared units `d1`, `d2`.
///
/// Sums and products cancel common factors of `d1` and `d2` from the
/// numerator; equality is tested by cross-multiplication.
pub struct LocalizedRing {
    units: [SuperPolynomial; 2],
    powers: Mutex<HashMap<(usize, u32), SuperPolynomial>>,
}

impl fmt::Debug for LocalizedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LocalizedRing")
            .field("d1", &self.units[0])
            .field("d2", &self.units[1])
            .finish()
    }
}

impl LocalizedRing {
    /// Both units must be even, homogeneous and nonzero.
    pub fn new(d1: SuperPolynomial, d2: SuperPolynomial) -> Self {
        for d in [&d1, &d2] {
            assert!(!d.is_zero(), "declared unit is zero");
            assert_eq!(d.parity(), Some(Parity::Even), "declared unit must be even");
            assert!(
                d.soul().is_zero(),
                "declared unit must be free of odd variables"
            );
        }
        Self {
            units: [d1, d2],
            powers: Mutex::new(HashMap::new()),
        }
    }

    pub fn d1(&self) -> &SuperPolynomial {
        &self.units[0]
    }

    pub fn d2(&self) -> &SuperPolynomial {
        &self.units[1]
    }

    /// `d_{which+1}^k`, cached.
    pub fn unit_power(&self, which: usize, k: u32) -> SuperPolynomial {
        if k == 0 {
            return SuperPolynomial::one();
        }
        if k == 1 {
            return self.units[which].clone();
        }
        if let Some(p) = self.powers.lock().unwrap().get(&(which, k)) {
            return p.clone();
        }
        let p = &self.unit_power(which, k - 1) * &self.units[which];
        self.powers.lock().unwrap().insert((which, k), p.clone());
        p
    }

    /// `d1^a d2^b`.
    pub fn denominator(&self, a: u32, b: u32) -> SuperPolynomial {
        &self.unit_power(0, a) * &self.unit_power(1, b)
    }

    /// Numerator of `x` rewritten over `d1^a d2^b`; requires `a >= x.a` and
    /// `b >= x.b`.
    pub fn numerator_over(&self, x: &LocalizedElement, a: u32, b: u32) -> SuperPolynomial {
        assert!(a >= x.a && b >= x.b, "target denominator does not divide");
        if a == x.a && b == x.b {
            return x.numerator.clone();
        }
        &x.numerator * &self.denominator(a - x.a, b - x.b)
    }

    pub fn from_poly(&self, p: SuperPolynomial) -> LocalizedElement {
        LocalizedElement::from_poly(p)
    }

    /// `1 / (d1^a d2^b)`.
    pub fn unit_inverse(&self, a: u32, b: u32) -> LocalizedElement {
        LocalizedElement::new(SuperPolynomial::one(), a, b)
    }

    /// Cancels every factor of `d1` and `d2` that divides the numerator.
    pub fn normalize(&self, mut x: LocalizedElement) -> LocalizedElement {
        if x.numerator.is_zero() {
            return LocalizedElement::from_poly(x.numerator);
        }
        for (which, power) in [(0, &mut x.a), (1, &mut x.b)] {
            while *power > 0 {
                match x.numerator.div_exact_even(&self.units[which]) {
                    Some(q) => {
                        x.numerator = q;
                        *power -= 1;
                    }
                    None => break,
                }
            }
        }
        x
    }

    /// Writes `body` as `c * d1^p * d2^q` when possible.
    fn factor_over_units(&self, body: &SuperPolynomial) -> Option<(Q, u32, u32)> {
        if body.is_zero() {
            return None;
        }
        if let Some(c) = body.as_constant() {
            return Some((c, 0, 0));
        }
        let target = body.max_degree();
        let deg = [self.units[0].max_degree(), self.units[1].max_degree()];
        let bound = |d: u32| target.checked_div(d).unwrap_or(0);
        for p in 0..=bound(deg[0]) {
            let rest = target - p * deg[0];
            let q = match deg[1] {
                0 if rest == 0 => 0,
                0 => continue,
                d if rest.is_multiple_of(d) => rest / d,
                _ => continue,
            };
            let candidate = self.denominator(p, q);
            if candidate.num_terms() != body.num_terms() {
                continue;
            }
            let (m, c0) = candidate.terms().next().unwrap();
            let ratio = body.coefficient(m) / c0;
            if ratio != 0u32 && candidate.scaled(&ratio) == *body {
                return Some((ratio, p, q));
            }
        }
        None
    }
}

impl SuperRing for LocalizedRing {
    type Elem = LocalizedElement;

    fn zero(&self) -> LocalizedElement {
        LocalizedElement::from_poly(SuperPolynomial::zero())
    }
    fn one(&self) -> LocalizedElement {
        LocalizedElement::from_poly(SuperPolynomial::one())
    }
    fn from_rational(&self, c: &Q) -> LocalizedElement {
        LocalizedElement::from_poly(SuperPolynomial::constant(c.clone()))
    }
    fn add(&self, x: &LocalizedElement, y: &LocalizedElement) -> LocalizedElement {
        if x.numerator.is_zero() {
            return y.clone();
        }
        if y.numerator.is_zero() {
            return x.clone();
        }
        let (a, b) = (x.a.max(y.a), x.b.max(y.b));
        let num = &self.numerator_over(x, a, b) + &self.numerator_over(y, a, b);
        self.normalize(LocalizedElement::new(num, a, b))
    }
    fn neg(&self, x: &LocalizedElement) -> LocalizedElement {
        LocalizedElement::new(-&x.numerator, x.a, x.b)
    }
    fn mul(&self, x: &LocalizedElement, y: &LocalizedElement) -> LocalizedElement {
        let num = &x.numerator * &y.numerator;
        if num.is_zero() {
            return self.zero();
        }
        self.normalize(LocalizedElement::new(num, x.a + y.a, x.b + y.b))
    }
    fn is_zero(&self, x: &LocalizedElement) -> bool {
        x.numerator.is_zero()
    }
    fn equal(&self, x: &LocalizedElement, y: &LocalizedElement) -> bool {
        let (a, b) = (x.a.max(y.a), x.b.max(y.b));
        self.numerator_over(x, a, b) == self.numerator_over(y, a, b)
    }
    fn parity(&self, x: &LocalizedElement) -> Option<Parity> {
        x.numerator.parity()
    }

    /// Inverts `N / (d1^a d2^b)` when the odd-free part of `N` is
    /// `c * d1^p * d2^q`: then `1/N = sum_k (-1)^k S^k / B^{k+1}` with
    /// `B = c d1^p d2^q` and `S` the nilpotent remainder.
    fn try_invert(&self, x: &LocalizedElement) -> Option<LocalizedElement> {
        let (c, p, q) = self.factor_over_units(&x.numerator.body())?;
        let soul = x.numerator.soul();
        let c_inv = Q::ONE / &c;
        let mut acc = self.zero();
        let mut power = SuperPolynomial::one();
        let mut k: u32 = 0;
        loop {
            let sign = if k.is_multiple_of(2) { Q::ONE } else { -Q::ONE };
            let mut coeff = sign;
            for _ in 0..=k {
                coeff *= &c_inv;
            }
            // S^k / (c^{k+1} d1^{p(k+1)} d2^{q(k+1)}) times d1^a d2^b
            let (da, db) = (p * (k + 1), q * (k + 1));
            let mut num = power.scaled(&coeff);
            let a = if da >= x.a {
                da - x.a
            } else {
                num = &num * &self.unit_power(0, x.a - da);
                0
            };
            let b = if db >= x.b {
                db - x.b
            } else {
                num = &num * &self.unit_power(1, x.b - db);
                0
            };
            acc = self.add(&acc, &LocalizedElement::new(num, a, b));
            power = &power * &soul;
            if power.is_zero() {
                return Some(acc);
            }
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn odd(v: u32) -> SuperPolynomial {
        SuperPolynomial::var(v, Parity::Odd)
    }

    fn even(v: u32) -> SuperPolynomial {
        SuperPolynomial::var(v, Parity::Even)
    }

    #[test]
    fn exact_division() {
        let d = &(&even(0) * &even(3)) - &(&even(1) * &even(2));
        let p = &(&(&odd(5) * &odd(6)) * &even(1)) + &(&even(0).pow(2) - &odd(7).scaled(&q(3)));
        assert_eq!((&p * &d).div_exact_even(&d), Some(p.clone()));
        assert_eq!((&p * &d.pow(2)).div_exact_even(&d), Some(&p * &d));
        assert_eq!(p.div_exact_even(&d), None);
        assert_eq!((&p + &even(1)).div_exact_even(&even(1)), None);
        assert_eq!(
            SuperPolynomial::zero().div_exact_even(&d),
            Some(SuperPolynomial::zero())
        );
    }

    #[test]
    fn normalization_cancels_units() {
        let ring = LocalizedRing::new(even(0), &(&even(1) * &even(2)) - &even(3));
        let x = LocalizedElement::new(&odd(5) * &ring.denominator(1, 2), 3, 2);
        let y = ring.normalize(x.clone());
        assert_eq!((y.a, y.b), (2, 0));
        assert_eq!(y.numerator, odd(5));
        assert!(ring.equal(&x, &y));
    }

    #[test]
    fn odd_square_vanishes() {
        assert!((&odd(1) * &odd(1)).is_zero());
    }

    #[test]
    fn odd_variables_anticommute() {
        let ab = &odd(1) * &odd(2);
        let ba = &odd(2) * &odd(1);
        assert_eq!(ab, -&ba);
        assert!(!ab.is_zero());
    }

    #[test]
    fn even_variables_commute() {
        assert_eq!(&even(0) * &even(3), &even(3) * &even(0));
        assert_eq!(&even(0) * &odd(3), &odd(3) * &even(0));
    }

    #[test]
    fn monomial_sign_counts_crossings() {
        // (v1 v3)(v0 v2): v0 jumps two factors, v2 jumps one -> odd
        let a = Monomial {
            even: vec![],
            odd: vec![1, 3],
        };
        let b = Monomial {
            even: vec![],
            odd: vec![0, 2],
        };
        let (m, neg) = a.mul(&b).unwrap();
        assert_eq!(m.odd_factors(), &[0, 1, 2, 3]);
        assert!(neg);
    }

    #[test]
    fn grassmann_inverse_terminates() {
        let g = PolyRing::grassmann(4);
        let t01 = &g.var(0) * &g.var(1);
        let t23 = &g.var(2) * &g.var(3);
        let x = &(&SuperPolynomial::constant(q(2)) + &t01) + &t23;
        let inv = g.try_invert(&x).unwrap();
        assert_eq!(&x * &inv, SuperPolynomial::one());
        assert!(g.try_invert(&t01).is_none());
        assert!(g.try_invert(&SuperPolynomial::zero()).is_none());
    }

    #[test]
    fn localized_inverse_of_unit_times_nilpotent_correction() {
        // d1 = v0 (even), d2 = v1 (even), x = v0 * v1 + v2 v3
        let ring = LocalizedRing::new(even(0), even(1));
        let x = LocalizedElement::from_poly(&(&even(0) * &even(1)) + &(&odd(2) * &odd(3)));
        let inv = ring.try_invert(&x).unwrap();
        assert!(ring.equal(&ring.mul(&x, &inv), &ring.one()));
        // an even variable that is not a declared unit is not inverted
        assert!(ring
            .try_invert(&LocalizedElement::from_poly(even(4)))
            .is_none());
        // equality by cross-multiplication: v0 / d1 == 1
        let y = LocalizedElement::new(even(0), 1, 0);
        assert!(ring.equal(&y, &ring.one()));
    }
}
