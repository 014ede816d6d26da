//! Exact scalars and sparse polynomials in `q` and `h`.
//!
//! [`QHPoly`] stores a finite map from monomials `q^a h^b` to nonzero
//! rational coefficients. `a` is a natural number; `b` may be negative,
//! because connection forms carry a single factor `1/h`. Which contexts accept
//! negative powers is decided by the callers (see [`QHPoly::is_polynomial`]).

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::{CheckedDiv, One, Signed, Zero};

use crate::Error;

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type BigRat = num_rational::BigRational;

pub fn rat(n: i64) -> BigRat {
    BigRat::from_integer(BigInt::from(n))
}

pub fn checked_div(a: &BigRat, b: &BigRat) -> Result<BigRat, Error> {
    a.checked_div(b).ok_or(Error::DivisionByZero)
}

/// The monomial `q^q h^h`. Ordered by `q` exponent first, then `h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub q: u32,
    pub h: i32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { q: 0, h: 0 };

    pub fn new(q: u32, h: i32) -> Self {
        Monomial { q, h }
    }
}

impl Mul for Monomial {
    type Output = Monomial;
    fn mul(self, rhs: Monomial) -> Monomial {
        Monomial {
            q: self.q + rhs.q,
            h: self.h + rhs.h,
        }
    }
}

/// Weighted grading with `deg h = 2` and `deg q = 2(N - k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grading {
    q_weight: i64,
}

impl Grading {
    pub fn new(n: i64, k: i64) -> Self {
        Grading {
            q_weight: 2 * (n - k),
        }
    }

    pub fn q_weight(&self) -> i64 {
        self.q_weight
    }

    pub fn degree(&self, m: Monomial) -> i64 {
        self.q_weight * i64::from(m.q) + 2 * i64::from(m.h)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DegreeError {
    #[error("the zero polynomial has no weighted degree")]
    ZeroPolynomial,
    #[error("inhomogeneous polynomial; monomial degrees: {}", fmt_degrees(.0))]
    Inhomogeneous(Vec<(Monomial, i64)>),
}

fn fmt_degrees(terms: &[(Monomial, i64)]) -> String {
    let parts: Vec<String> = terms
        .iter()
        .map(|(m, d)| alloc::format!("{}:{}", MonomialDisplay(*m), d))
        .collect();
    parts.join(", ")
}

/// Sparse polynomial in `q` (nonnegative powers) and `h` (integer powers)
/// with exact rational coefficients. No zero coefficient is ever stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct QHPoly {
    terms: BTreeMap<Monomial, BigRat>,
}

impl QHPoly {
    pub fn zero() -> Self {
        QHPoly::default()
    }

    pub fn one() -> Self {
        QHPoly::constant(BigRat::one())
    }

    pub fn q() -> Self {
        QHPoly::monomial(BigRat::one(), 1, 0)
    }

    pub fn h() -> Self {
        QHPoly::monomial(BigRat::one(), 0, 1)
    }

    pub fn constant(c: BigRat) -> Self {
        QHPoly::monomial(c, 0, 0)
    }

    pub fn from_int(c: i64) -> Self {
        QHPoly::constant(rat(c))
    }

    /// `c q^a h^b`.
    pub fn monomial(c: BigRat, q: u32, h: i32) -> Self {
        let mut p = QHPoly::zero();
        p.add_term(Monomial { q, h }, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff(Monomial::ONE).is_one()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order: `(q-exp, h-exp)` ascending.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (Monomial, &BigRat)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn coeff(&self, m: Monomial) -> BigRat {
        self.terms.get(&m).cloned().unwrap_or_else(BigRat::zero)
    }

    /// Adds `c * m` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: BigRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| *m == Monomial::ONE)
    }

    /// The constant coefficient if the polynomial has no `q` or `h`.
    pub fn as_constant(&self) -> Option<BigRat> {
        self.is_constant().then(|| self.coeff(Monomial::ONE))
    }

    /// If the polynomial is a single monomial, return it with its coefficient.
    pub fn as_monomial(&self) -> Option<(Monomial, &BigRat)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, c)| (*m, c))
        } else {
            None
        }
    }

    /// True when no negative power of `h` occurs.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|m| m.h >= 0)
    }

    pub fn min_h_exp(&self) -> Option<i32> {
        self.terms.keys().map(|m| m.h).min()
    }

    pub fn max_h_exp(&self) -> Option<i32> {
        self.terms.keys().map(|m| m.h).max()
    }

    pub fn max_q_exp(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.q).max()
    }

    pub fn scale(&self, c: &BigRat) -> Self {
        if c.is_zero() {
            return QHPoly::zero();
        }
        QHPoly {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    /// Multiplies by `q^dq h^dh`.
    pub fn shift(&self, dq: u32, dh: i32) -> Self {
        QHPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (Monomial::new(m.q + dq, m.h + dh), v.clone()))
                .collect(),
        }
    }

    /// Applies `q d/dq` (the derivation `d/dt` for `q = e^t`).
    pub fn euler_derivative(&self) -> Self {
        let mut out = QHPoly::zero();
        for (m, c) in &self.terms {
            if m.q > 0 {
                out.add_term(*m, c * rat(i64::from(m.q)));
            }
        }
        out
    }

    /// Substitutes `q = 0`.
    pub fn at_q_zero(&self) -> Self {
        QHPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.q == 0)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Substitutes `h = 1`.
    pub fn at_h_one(&self) -> Self {
        let mut out = QHPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(Monomial::new(m.q, 0), c.clone());
        }
        out
    }

    /// The part of the polynomial carrying exactly `h^j`, with `h` removed.
    pub fn h_coefficient(&self, j: i32) -> Self {
        QHPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.h == j)
                .map(|(m, c)| (Monomial::new(m.q, 0), c.clone()))
                .collect(),
        }
    }

    /// Distinct powers of `h` occurring, ascending.
    pub fn h_exponents(&self) -> Vec<i32> {
        let mut hs: Vec<i32> = self.terms.keys().map(|m| m.h).collect();
        hs.sort_unstable();
        hs.dedup();
        hs
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = QHPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Weighted degree `2a(N-k) + 2b`, shared by every monomial `q^a h^b`.
    pub fn weighted_degree(&self, grading: Grading) -> Result<i64, DegreeError> {
        let mut degrees = self.terms.keys().map(|m| (*m, grading.degree(*m)));
        let Some((_, first)) = degrees.next() else {
            return Err(DegreeError::ZeroPolynomial);
        };
        if degrees.all(|(_, d)| d == first) {
            Ok(first)
        } else {
            Err(DegreeError::Inhomogeneous(
                self.terms
                    .keys()
                    .map(|m| (*m, grading.degree(*m)))
                    .collect(),
            ))
        }
    }

    /// Homogeneity test that treats zero as having every degree.
    pub fn is_homogeneous_of(&self, grading: Grading, degree: i64) -> bool {
        self.terms.keys().all(|m| grading.degree(*m) == degree)
    }
}

impl From<BigRat> for QHPoly {
    fn from(c: BigRat) -> Self {
        QHPoly::constant(c)
    }
}

impl<'a> Add<&'a QHPoly> for &'a QHPoly {
    type Output = QHPoly;
    fn add(self, rhs: &QHPoly) -> QHPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for QHPoly {
    type Output = QHPoly;
    fn add(mut self, rhs: QHPoly) -> QHPoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&QHPoly> for QHPoly {
    fn add_assign(&mut self, rhs: &QHPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl SubAssign<&QHPoly> for QHPoly {
    fn sub_assign(&mut self, rhs: &QHPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c.clone());
        }
    }
}

impl<'a> Sub<&'a QHPoly> for &'a QHPoly {
    type Output = QHPoly;
    fn sub(self, rhs: &QHPoly) -> QHPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for QHPoly {
    type Output = QHPoly;
    fn sub(mut self, rhs: QHPoly) -> QHPoly {
        self -= &rhs;
        self
    }
}

impl<'a> Mul<&'a QHPoly> for &'a QHPoly {
    type Output = QHPoly;
    fn mul(self, rhs: &QHPoly) -> QHPoly {
        let mut out = QHPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(*ma * *mb, ca * cb);
            }
        }
        out
    }
}

impl Mul for QHPoly {
    type Output = QHPoly;
    fn mul(self, rhs: QHPoly) -> QHPoly {
        &self * &rhs
    }
}

impl Neg for &QHPoly {
    type Output = QHPoly;
    fn neg(self) -> QHPoly {
        QHPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

impl Neg for QHPoly {
    type Output = QHPoly;
    fn neg(self) -> QHPoly {
        -&self
    }
}

struct MonomialDisplay(Monomial);

impl fmt::Display for MonomialDisplay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.0;
        let mut parts: Vec<String> = Vec::new();
        match m.q {
            0 => {}
            1 => parts.push("q".into()),
            a => parts.push(alloc::format!("q^{a}")),
        }
        match m.h {
            0 => {}
            1 => parts.push("h".into()),
            b => parts.push(alloc::format!("h^{b}")),
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// Canonical text form: terms sorted by `(q-exp, h-exp)` ascending, e.g.
/// `1 + 24*q + 4464*q^2` or `120*q*h^3 - 3/2*q^2*h^-1`.
impl fmt::Display for QHPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            match (idx, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            if *m == Monomial::ONE {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", MonomialDisplay(*m))?;
            } else {
                write!(f, "{abs}*{}", MonomialDisplay(*m))?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse polynomial {input:?}: {reason}")]
pub struct ParseError {
    pub input: String,
    pub reason: String,
}

impl ParseError {
    fn new(input: &str, reason: impl Into<String>) -> Self {
        ParseError {
            input: input.to_string(),
            reason: reason.into(),
        }
    }
}

/// Parses the canonical text form. Also accepts terms in any order, repeated
/// factors and a coefficient in any position of a product.
impl FromStr for QHPoly {
    type Err = ParseError;

    fn from_str(input: &str) -> Result<Self, ParseError> {
        let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(ParseError::new(input, "empty input"));
        }
        let mut out = QHPoly::zero();
        let bytes = compact.as_bytes();
        let mut start = 0;
        let mut sign = BigRat::one();
        let mut i = 0;
        if bytes[0] == b'-' || bytes[0] == b'+' {
            if bytes[0] == b'-' {
                sign = -sign;
            }
            start = 1;
            i = 1;
        }
        while i <= bytes.len() {
            // A '+' or '-' splits terms unless it follows '^' (signed exponent).
            let at_split = i == bytes.len()
                || ((bytes[i] == b'+' || bytes[i] == b'-') && i > start && bytes[i - 1] != b'^');
            if at_split {
                let (m, c) = parse_term(input, &compact[start..i])?;
                out.add_term(m, c * &sign);
                if i < bytes.len() {
                    sign = if bytes[i] == b'-' {
                        -BigRat::one()
                    } else {
                        BigRat::one()
                    };
                }
                start = i + 1;
            }
            i += 1;
        }
        Ok(out)
    }
}

fn parse_term(input: &str, term: &str) -> Result<(Monomial, BigRat), ParseError> {
    if term.is_empty() {
        return Err(ParseError::new(input, "empty term"));
    }
    let mut coeff = BigRat::one();
    let mut mono = Monomial::ONE;
    for factor in term.split('*') {
        let (base, exp) = match factor.split_once('^') {
            Some((b, e)) => {
                let e: i32 = e.parse().map_err(|_| {
                    ParseError::new(input, alloc::format!("bad exponent in {factor:?}"))
                })?;
                (b, Some(e))
            }
            None => (factor, None),
        };
        match base {
            "q" => {
                let e = exp.unwrap_or(1);
                let e =
                    u32::try_from(e).map_err(|_| ParseError::new(input, "negative power of q"))?;
                mono.q += e;
            }
            "h" => mono.h += exp.unwrap_or(1),
            num => {
                if exp.is_some() {
                    return Err(ParseError::new(input, "exponent on a number"));
                }
                coeff *= parse_rational(num)
                    .ok_or_else(|| ParseError::new(input, alloc::format!("bad factor {num:?}")))?;
            }
        }
    }
    Ok((mono, coeff))
}

fn parse_rational(s: &str) -> Option<BigRat> {
    let parse_int = |t: &str| -> Option<BigInt> {
        if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        t.parse().ok()
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return None;
            }
            Some(BigRat::new(parse_int(n)?, d))
        }
        None => Some(BigRat::from_integer(parse_int(s)?)),
    }
}
