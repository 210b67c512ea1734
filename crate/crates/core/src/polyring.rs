//! Sparse multivariate polynomials over `ℤ` in the variables `x1, x2, …`.
//!
//! Terms live in a `BTreeMap` keyed by [`Monomial`], whose derived order is
//! pure lexicographic with `x1 ≻ x2 ≻ …`. Iteration is therefore
//! deterministic and the first key is the lex-minimal monomial.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("modulus {0} is below 2")]
    ModulusTooSmall(u64),
    #[error("point has {got} coordinates but the polynomial uses x{needed}")]
    PointTooShort { got: usize, needed: usize },
    #[error("the zero polynomial has no monomials")]
    ZeroPolynomial,
    #[error("cannot parse polynomial {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// Exponent vector of `x1^e1 * x2^e2 * …`, stored without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(mut exponents: Vec<u32>) -> Self {
        while exponents.last() == Some(&0) {
            exponents.pop();
        }
        Self(exponents)
    }

    pub fn one() -> Self {
        Self(Vec::new())
    }

    /// `x_i` for 1-based `i`.
    pub fn variable(i: usize) -> Self {
        assert!(i >= 1, "variables are indexed from 1");
        let mut e = vec![0; i];
        e[i - 1] = 1;
        Self(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Exponent of `x_i` (1-based).
    pub fn exponent(&self, i: usize) -> u32 {
        self.0.get(i.wrapping_sub(1)).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Largest variable index with a nonzero exponent.
    pub fn num_vars(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (long, short) = if self.0.len() >= other.0.len() {
            (&self.0, &other.0)
        } else {
            (&other.0, &self.0)
        };
        let mut e = long.clone();
        for (a, b) in e.iter_mut().zip(short) {
            *a += b;
        }
        Self(e)
    }

    /// Exchanges the exponents of `x_i` and `x_{i+1}`.
    pub fn swap(&self, i: usize) -> Self {
        let mut e = self.0.clone();
        if e.len() < i + 1 {
            e.resize(i + 1, 0);
        }
        e.swap(i - 1, i);
        Self::new(e)
    }

    fn with_pair(&self, i: usize, a: u32, b: u32) -> Self {
        let mut e = self.0.clone();
        if e.len() < i + 1 {
            e.resize(i + 1, 0);
        }
        e[i - 1] = a;
        e[i] = b;
        Self::new(e)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial with arbitrary-precision integer coefficients and no zero terms.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparsePolynomial {
    terms: BTreeMap<Monomial, BigInt>,
}

impl SparsePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(Monomial::one(), c)
    }

    pub fn variable(i: usize) -> Self {
        Self::monomial(Monomial::variable(i), 1)
    }

    pub fn monomial(m: Monomial, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c.into());
        p
    }

    /// Sums the given terms, merging duplicate monomials.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c.into());
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing lex order.
    pub fn terms(
        &self,
    ) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Largest variable index that occurs.
    pub fn num_vars(&self) -> usize {
        self.terms.keys().map(Monomial::num_vars).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    /// Splits into homogeneous components, ordered by increasing degree.
    pub fn homogeneous_components(&self) -> Vec<(u32, SparsePolynomial)> {
        let mut by_degree: BTreeMap<u32, SparsePolynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            by_degree
                .entry(m.degree())
                .or_default()
                .terms
                .insert(m.clone(), c.clone());
        }
        by_degree.into_iter().collect()
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Self, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for (m, a) in &other.terms {
            self.add_term(m.clone(), a * c);
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `s_i F`: exchanges `x_i` and `x_{i+1}`.
    pub fn swap_variables(&self, i: usize) -> Self {
        assert!(i >= 1, "variables are indexed from 1");
        Self {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.swap(i), c.clone()))
                .collect(),
        }
    }

    /// `∂_i F = (F - s_i F) / (x_i - x_{i+1})`.
    ///
    /// The numerator is divided by long division in the `x_i` direction.
    /// Grouping terms by everything except the `(x_i, x_{i+1})` exponents
    /// leaves binary forms `Σ c_k x_i^k x_{i+1}^{D-k}`; dividing one by
    /// `x_i - x_{i+1}` from the top carries `r_k = c_k + r_{k+1}` into the
    /// quotient coefficient of `x_i^{k-1} x_{i+1}^{D-k}`, and the final carry
    /// `r_0` is the remainder, which must vanish.
    pub fn divided_difference(&self, i: usize) -> Self {
        assert!(i >= 1, "variables are indexed from 1");
        let numerator = self - &self.swap_variables(i);

        // (rest monomial with x_i, x_{i+1} zeroed, D) -> {k -> c_k}
        let mut groups: BTreeMap<(Monomial, u32), BTreeMap<u32, BigInt>> = BTreeMap::new();
        for (m, c) in numerator.terms {
            let a = m.exponent(i);
            let b = m.exponent(i + 1);
            groups
                .entry((m.with_pair(i, 0, 0), a + b))
                .or_default()
                .insert(a, c);
        }

        let mut quotient = Self::zero();
        for ((rest, total), coeffs) in groups {
            let mut carry = BigInt::zero();
            let top = *coeffs.keys().next_back().expect("groups are nonempty");
            for k in (1..=top).rev() {
                if let Some(c) = coeffs.get(&k) {
                    carry += c;
                }
                if !carry.is_zero() {
                    quotient.add_term(rest.with_pair(i, k - 1, total - k), carry.clone());
                }
            }
            if let Some(c) = coeffs.get(&0) {
                carry += c;
            }
            assert!(
                carry.is_zero(),
                "divided difference left remainder {carry} for x{i}; numerator was not antisymmetric"
            );
        }
        quotient
    }

    /// Value at `x_1 = … = 1`, i.e. the coefficient sum.
    pub fn evaluate_all_ones(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Exact evaluation at an integer point.
    pub fn evaluate(&self, point: &[BigInt]) -> Result<BigInt, PolyError> {
        self.check_point_len(point.len())?;
        let mut total = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                t *= num_traits::pow(x.clone(), e as usize);
            }
            total += t;
        }
        Ok(total)
    }

    /// Evaluation in `ℤ/pℤ`; `point` entries are reduced before use.
    pub fn evaluate_mod_p(&self, point: &[u64], prime: u64) -> Result<u64, PolyError> {
        if prime < 2 {
            return Err(PolyError::ModulusTooSmall(prime));
        }
        self.check_point_len(point.len())?;
        let modulus = BigInt::from(prime);
        let mut total: u64 = 0;
        for (m, c) in &self.terms {
            let mut t = reduce_mod(c, &modulus);
            for (&x, &e) in point.iter().zip(m.exponents()) {
                t = mul_mod(t, pow_mod(x % prime, e, prime), prime);
            }
            total = ((total as u128 + t as u128) % prime as u128) as u64;
        }
        Ok(total)
    }

    fn check_point_len(&self, got: usize) -> Result<(), PolyError> {
        let needed = self.num_vars();
        if got < needed {
            Err(PolyError::PointTooShort { got, needed })
        } else {
            Ok(())
        }
    }

    /// Minimal monomial under lex order with `x1 ≻ x2 ≻ …`.
    pub fn lex_min_monomial(&self) -> Result<&Monomial, PolyError> {
        self.terms.keys().next().ok_or(PolyError::ZeroPolynomial)
    }
}

/// `c mod p` as a canonical residue in `[0, p)`.
pub(crate) fn reduce_mod(c: &BigInt, modulus: &BigInt) -> u64 {
    let r = ((c % modulus) + modulus) % modulus;
    r.to_u64().expect("residue fits in u64")
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut e: u32, p: u64) -> u64 {
    let mut acc = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

impl Add for &SparsePolynomial {
    type Output = SparsePolynomial;

    fn add(self, rhs: &SparsePolynomial) -> SparsePolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &SparsePolynomial {
    type Output = SparsePolynomial;

    fn sub(self, rhs: &SparsePolynomial) -> SparsePolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &SparsePolynomial {
    type Output = SparsePolynomial;

    fn neg(self) -> SparsePolynomial {
        SparsePolynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &SparsePolynomial {
    type Output = SparsePolynomial;

    fn mul(self, rhs: &SparsePolynomial) -> SparsePolynomial {
        let mut out = SparsePolynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for SparsePolynomial {
            type Output = SparsePolynomial;
            fn $method(self, rhs: SparsePolynomial) -> SparsePolynomial {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for SparsePolynomial {
    /// Terms from lex-largest to lex-smallest, e.g. `3*x1^2*x2 - x3 + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (idx, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for SparsePolynomial {
    type Err = PolyError;

    /// Parses sums of products of integers and powers `x<i>^<e>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Parser::new(s).parse()
    }
}

struct Parser<'a> {
    input: &'a str,
    chars: Vec<char>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Self {
        Self {
            input,
            chars: input.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
        }
    }

    fn err(&self, reason: impl Into<String>) -> PolyError {
        PolyError::Parse {
            input: self.input.to_string(),
            reason: reason.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<SparsePolynomial, PolyError> {
        if self.chars.is_empty() {
            return Err(self.err("empty input"));
        }
        let mut poly = SparsePolynomial::zero();
        let mut first = true;
        while self.pos < self.chars.len() {
            let sign = match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    BigInt::one()
                }
                Some('-') => {
                    self.pos += 1;
                    -BigInt::one()
                }
                _ if first => BigInt::one(),
                Some(c) => return Err(self.err(format!("expected '+' or '-' before {c:?}"))),
                None => unreachable!(),
            };
            first = false;
            let (m, c) = self.term()?;
            poly.add_term(m, sign * c);
        }
        Ok(poly)
    }

    fn term(&mut self) -> Result<(Monomial, BigInt), PolyError> {
        let mut coeff = BigInt::one();
        let mut mono = Monomial::one();
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => coeff *= self.integer()?,
                Some('x') => {
                    self.pos += 1;
                    let i = self.small_integer()?;
                    if i == 0 {
                        return Err(self.err("variables are indexed from x1"));
                    }
                    let e = if self.peek() == Some('^') {
                        self.pos += 1;
                        u32::try_from(self.small_integer()?)
                            .map_err(|_| self.err("exponent too large"))?
                    } else {
                        1
                    };
                    let mut exps = vec![0; i];
                    exps[i - 1] = e;
                    mono = mono.mul(&Monomial::new(exps));
                }
                Some(c) => return Err(self.err(format!("unexpected {c:?}"))),
                None => return Err(self.err("unexpected end of input")),
            }
            if self.peek() == Some('*') {
                self.pos += 1;
            } else {
                return Ok((mono, coeff));
            }
        }
    }

    fn digits(&mut self) -> Result<String, PolyError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn integer(&mut self) -> Result<BigInt, PolyError> {
        let d = self.digits()?;
        d.parse().map_err(|_| self.err("bad integer"))
    }

    fn small_integer(&mut self) -> Result<usize, PolyError> {
        let d = self.digits()?;
        d.parse().map_err(|_| self.err("index out of range"))
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exponents: Vec<u32>,
    coeff: DecimalInt,
}

/// Integer serialized as a decimal string; numbers are also accepted on input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecimalInt(pub BigInt);

impl Serialize for DecimalInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for DecimalInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Str(String),
            Signed(i64),
            Unsigned(u64),
        }
        match Raw::deserialize(d)? {
            Raw::Str(s) => s
                .trim()
                .parse::<BigInt>()
                .map(DecimalInt)
                .map_err(|_| serde::de::Error::custom(format!("invalid decimal integer {s:?}"))),
            Raw::Signed(v) => Ok(DecimalInt(v.into())),
            Raw::Unsigned(v) => Ok(DecimalInt(v.into())),
        }
    }
}

impl Serialize for SparsePolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<TermJson> = self
            .terms
            .iter()
            .map(|(m, c)| TermJson {
                exponents: m.exponents().to_vec(),
                coeff: DecimalInt(c.clone()),
            })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SparsePolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let terms = Vec::<TermJson>::deserialize(d)?;
        Ok(Self::from_terms(
            terms
                .into_iter()
                .map(|t| (Monomial::new(t.exponents), t.coeff.0)),
        ))
    }
}
