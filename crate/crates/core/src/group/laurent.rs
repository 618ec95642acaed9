use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize};

/// Integer Laurent polynomial in `t`; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    /// `t`
    pub fn t() -> Self {
        Self::monomial(1, 1)
    }

    pub fn monomial(c: impl Into<BigInt>, e: i64) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { terms }
    }

    pub fn from_terms<C: Into<BigInt>>(terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    /// Dense coefficients starting at `t^low`.
    pub fn from_dense(low: i64, coeffs: &[BigInt]) -> Self {
        Self::from_terms(coeffs.iter().enumerate().map(|(i, c)| (low + i as i64, c.clone())))
    }

    pub fn add_term(&mut self, e: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Multiplies by `t^e`.
    pub fn shift(&self, e: i64) -> Self {
        Self { terms: self.terms.iter().map(|(k, c)| (k + e, c.clone())).collect() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect() }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Derivative with respect to `t`, evaluated at `t = 1`.
    pub fn derivative_at_one(&self) -> BigInt {
        self.terms.iter().map(|(e, c)| c * BigInt::from(*e)).sum()
    }

    /// Sum of absolute values of coefficients.
    pub fn l1_norm(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).sum()
    }

    /// Dense coefficients from the lowest exponent; empty for zero.
    pub fn to_dense(&self) -> (i64, Vec<BigInt>) {
        let (Some(lo), Some(hi)) = (self.min_exp(), self.max_exp()) else {
            return (0, Vec::new());
        };
        let mut v = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (e, c) in &self.terms {
            v[(e - lo) as usize] = c.clone();
        }
        (lo, v)
    }

    /// Representative of `±t^a · self` with lowest exponent 0 and positive
    /// leading coefficient.
    pub fn canonical_unit(&self) -> Self {
        let Some(lo) = self.min_exp() else {
            return Self::zero();
        };
        let p = self.shift(-lo);
        match p.terms.values().next_back() {
            Some(c) if c.is_negative() => -p,
            _ => p,
        }
    }

    /// Coefficient pairs, ascending by exponent.
    pub fn pairs(&self) -> Vec<(i64, BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c.clone())).collect()
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let unit = a.is_one();
            match *e {
                0 => write!(f, "{a}")?,
                1 if unit => f.write_str("t")?,
                1 => write!(f, "{a}*t")?,
                _ if unit => write!(f, "t^{e}")?,
                _ => write!(f, "{a}*t^{e}")?,
            }
        }
        Ok(())
    }
}

fn coef_json(c: &BigInt) -> serde_json::Value {
    match i64::try_from(c) {
        Ok(v) => serde_json::Value::from(v),
        Err(_) => serde_json::Value::String(c.to_string()),
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            seq.serialize_element(&(e, coef_json(c)))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pairs = Vec::<(i64, serde_json::Value)>::deserialize(d)?;
        let mut p = LaurentPoly::zero();
        for (e, v) in pairs {
            let c: BigInt = match v {
                serde_json::Value::Number(n) => n
                    .as_i64()
                    .map(BigInt::from)
                    .ok_or_else(|| serde::de::Error::custom("coefficient must be an integer"))?,
                serde_json::Value::String(s) => s.parse().map_err(serde::de::Error::custom)?,
                _ => return Err(serde::de::Error::custom("coefficient must be an integer")),
            };
            p.add_term(e, c);
        }
        Ok(p)
    }
}

// Dense integer polynomials (index = degree) for gcd computations.

fn trim(p: &mut Vec<BigInt>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn content(p: &[BigInt]) -> BigInt {
    p.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn primitive(p: &[BigInt]) -> Vec<BigInt> {
    let c = content(p);
    if c.is_zero() {
        return Vec::new();
    }
    p.iter().map(|x| x / &c).collect()
}

/// Pseudo-remainder of `a` by `b` (both nonzero, deg a >= deg b).
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    let mut steps = a.len() - db;
    while r.len() > db && !r.is_empty() {
        steps -= 1;
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for x in r.iter_mut() {
            *x *= lb;
        }
        for (i, bi) in b.iter().enumerate() {
            r[dr - db + i] -= &lr * bi;
        }
        trim(&mut r);
    }
    let pad = num_traits::pow(lb.clone(), steps);
    r.into_iter().map(|x| x * &pad).collect()
}

/// Gcd in `Z[t]` by the subresultant remainder sequence. The result is
/// primitive up to the gcd of contents, with positive leading coefficient.
pub(crate) fn poly_gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(&mut a);
    trim(&mut b);
    if a.is_empty() {
        return normalize_sign(b);
    }
    if b.is_empty() {
        return normalize_sign(a);
    }
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    let c = content(&a).gcd(&content(&b));
    let mut a = primitive(&a);
    let mut b = primitive(&b);
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let delta = (a.len() - b.len()) as u32;
        let r = pseudo_rem(&a, &b);
        if r.is_empty() {
            break;
        }
        if r.len() == 1 {
            return vec![c];
        }
        let div = &g * num_traits::pow(h.clone(), delta as usize);
        a = b;
        b = r.into_iter().map(|x| x / &div).collect();
        g = a.last().expect("nonzero").clone();
        h = if delta == 0 {
            h
        } else {
            num_traits::pow(g.clone(), delta as usize) / num_traits::pow(h.clone(), delta as usize - 1)
        };
    }
    let out: Vec<BigInt> = primitive(&b).into_iter().map(|x| x * &c).collect();
    normalize_sign(out)
}

fn normalize_sign(p: Vec<BigInt>) -> Vec<BigInt> {
    match p.last() {
        Some(l) if l.is_negative() => p.into_iter().map(|x| -x).collect(),
        _ => p,
    }
}

/// Gcd of Laurent polynomials, up to units `±t^a`; returned in
/// [`LaurentPoly::canonical_unit`] form.
pub fn laurent_gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let (_, da) = a.to_dense();
    let (_, db) = b.to_dense();
    LaurentPoly::from_dense(0, &poly_gcd(&da, &db)).canonical_unit()
}
