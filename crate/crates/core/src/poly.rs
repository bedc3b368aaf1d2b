//! Exact Laurent polynomials and rational functions in one indeterminate `q`.
//!
//! [`LaurentPoly`] stores a dense coefficient vector starting at its lowest
//! exponent, trimmed at both ends, so equal polynomials have identical
//! representations. [`RationalFn`] keeps numerator and denominator reduced
//! with the denominator normalized (lowest exponent 0, positive leading
//! coefficient, coprime integer content), which makes equality structural.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Substitutions of the indeterminate used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Substitution {
    /// `q -> -q`
    Negate,
    /// `q -> q^2`
    Square,
    /// `q -> q^{-1}`
    Invert,
}

/// An element of `Z[q, q^{-1}]`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    low: i64,
    coeffs: Vec<BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    /// The indeterminate itself.
    pub fn q() -> Self {
        Self::monomial(1, 1)
    }

    pub fn constant<C: Into<BigInt>>(c: C) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * q^exp`
    pub fn monomial<C: Into<BigInt>>(c: C, exp: i64) -> Self {
        Self::from_raw(exp, vec![c.into()])
    }

    /// Builds `sum_i coeffs[i] * q^(low + i)`.
    pub fn from_coeffs<C: Into<BigInt>>(low: i64, coeffs: impl IntoIterator<Item = C>) -> Self {
        Self::from_raw(low, coeffs.into_iter().map(Into::into).collect())
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_terms<C: Into<BigInt>>(terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut acc = Self::zero();
        for (e, c) in terms {
            acc += &Self::monomial(c, e);
        }
        acc
    }

    fn from_raw(low: i64, mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        let lead_zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros == coeffs.len() {
            return Self::zero();
        }
        coeffs.drain(..lead_zeros);
        Self {
            low: low + lead_zeros as i64,
            coeffs,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn min_exp(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn max_exp(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    /// Coefficient of `q^exp` (zero when absent).
    pub fn coeff(&self, exp: i64) -> BigInt {
        let idx = exp - self.low;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            BigInt::zero()
        } else {
            self.coeffs[idx as usize].clone()
        }
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i64, c))
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// True when every exponent is nonnegative.
    pub fn is_polynomial(&self) -> bool {
        self.is_zero() || self.low >= 0
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self {
            low: self.low + k,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_raw(self.low, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn substitute(&self, rule: Substitution) -> Self {
        match rule {
            Substitution::Negate => {
                let coeffs = self
                    .coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, c)| if (self.low + i as i64).is_odd() { -c } else { c.clone() })
                    .collect();
                Self::from_raw(self.low, coeffs)
            }
            Substitution::Square => {
                if self.is_zero() {
                    return Self::zero();
                }
                let mut coeffs = vec![BigInt::zero(); 2 * self.coeffs.len() - 1];
                for (i, c) in self.coeffs.iter().enumerate() {
                    coeffs[2 * i] = c.clone();
                }
                Self::from_raw(2 * self.low, coeffs)
            }
            Substitution::Invert => match self.max_exp() {
                None => Self::zero(),
                Some(hi) => Self::from_raw(-hi, self.coeffs.iter().rev().cloned().collect()),
            },
        }
    }

    /// `p(-q)`
    pub fn neg_q(&self) -> Self {
        self.substitute(Substitution::Negate)
    }

    /// `p(q^{-1})`
    pub fn bar(&self) -> Self {
        self.substitute(Substitution::Invert)
    }

    /// Exact value at a nonzero integer.
    pub fn eval_int(&self, x: i64) -> Result<BigRational> {
        if x == 0 {
            if self.is_polynomial() {
                return Ok(BigRational::from_integer(self.coeff(0)));
            }
            return Err(Error::Domain("evaluation at q = 0 with negative exponents".into()));
        }
        let x = BigRational::from_integer(BigInt::from(x));
        let mut acc = BigRational::zero();
        for (e, c) in self.terms() {
            let c = BigRational::from_integer(c.clone());
            acc += c * pow_rat(&x, e);
        }
        Ok(acc)
    }

    /// Integer value at `q = x` for `x` in `{1, -1}`, where the value is always integral.
    pub fn eval_unit(&self, x: i64) -> BigInt {
        assert!(x == 1 || x == -1);
        self.terms()
            .map(|(e, c)| if x == -1 && e.is_odd() { -c } else { c.clone() })
            .sum()
    }

    /// Exact division in `Z[q, q^{-1}]`; `None` when `divisor` does not divide.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (quot, rem) = dense_divmod(&self.coeffs, &divisor.coeffs)?;
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::from_raw(self.low - divisor.low, quot))
    }

    /// The part of `self` made of terms with exponent strictly below `bound`.
    pub fn truncate_below(&self, bound: i64) -> Self {
        Self::from_terms(self.terms().filter(|(e, _)| *e < bound).map(|(e, c)| (e, c.clone())))
    }

    /// `p(q) == q^d p(q^{-1})`
    pub fn is_palindromic(&self, degree: i64) -> bool {
        self.bar().shift(degree) == *self
    }

    /// Renders as `c0 + c1*q + c2*q^2`, ascending degree.
    pub fn to_plain_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match e {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{e}"),
            };
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        out
    }

    fn add_scaled(&mut self, other: &Self, negate: bool) {
        if other.is_zero() {
            return;
        }
        if self.is_zero() {
            *self = if negate { -other.clone() } else { other.clone() };
            return;
        }
        let low = self.low.min(other.low);
        let hi = self.max_exp().unwrap().max(other.max_exp().unwrap());
        let mut coeffs = vec![BigInt::zero(); (hi - low + 1) as usize];
        for (i, c) in self.coeffs.drain(..).enumerate() {
            coeffs[(self.low - low) as usize + i] = c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            let slot = &mut coeffs[(other.low - low) as usize + i];
            if negate {
                *slot -= c;
            } else {
                *slot += c;
            }
        }
        *self = Self::from_raw(low, coeffs);
    }
}

fn pow_rat(x: &BigRational, e: i64) -> BigRational {
    let p = num_traits::pow(x.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_plain_string())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        self.add_scaled(rhs, false);
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        self.add_scaled(rhs, true);
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly::from_raw(self.low + rhs.low, dense_mul(&self.coeffs, &rhs.coeffs))
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(mut self) -> LaurentPoly {
        for c in &mut self.coeffs {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -self.clone()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident, $ty:ty) => {
        impl $tr for $ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&$ty> for $ty {
            type Output = $ty;
            fn $m(self, rhs: &$ty) -> $ty {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add, LaurentPoly);
forward_owned!(Sub, sub, LaurentPoly);
forward_owned!(Mul, mul, LaurentPoly);

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(None)?;
        for (e, c) in self.terms() {
            seq.serialize_element(&(e, Coefficient(c.clone())))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct PairsVisitor;
        impl<'de> Visitor<'de> for PairsVisitor {
            type Value = LaurentPoly;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an array of [exponent, coefficient] pairs")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<LaurentPoly, A::Error> {
                let mut terms: Vec<(i64, BigInt)> = Vec::new();
                while let Some((e, Coefficient(c))) = seq.next_element::<(i64, Coefficient)>()? {
                    if c.is_zero() {
                        return Err(de::Error::custom("zero coefficient in polynomial"));
                    }
                    if terms.last().is_some_and(|(prev, _)| *prev >= e) {
                        return Err(de::Error::custom("exponents must be strictly increasing"));
                    }
                    terms.push((e, c));
                }
                Ok(LaurentPoly::from_terms(terms))
            }
        }
        deserializer.deserialize_seq(PairsVisitor)
    }
}

/// A JSON integer coefficient; values outside `i64` are written as decimal strings.
struct Coefficient(BigInt);

impl Serialize for Coefficient {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => serializer.serialize_i64(v),
            None => serializer.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Coefficient {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct CoeffVisitor;
        impl Visitor<'_> for CoeffVisitor {
            type Value = Coefficient;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or decimal string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Coefficient, E> {
                Ok(Coefficient(v.into()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Coefficient, E> {
                Ok(Coefficient(v.into()))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Coefficient, E> {
                v.parse().map(Coefficient).map_err(E::custom)
            }
        }
        deserializer.deserialize_any(CoeffVisitor)
    }
}

// Dense helpers on ascending coefficient vectors.

fn dense_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn dense_trim(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

/// Long division over `Z`; `None` if a leading coefficient fails to divide.
fn dense_divmod(num: &[BigInt], den: &[BigInt]) -> Option<(Vec<BigInt>, Vec<BigInt>)> {
    let mut rem: Vec<BigInt> = num.to_vec();
    dense_trim(&mut rem);
    let lead = den.last()?;
    if rem.len() < den.len() {
        return Some((Vec::new(), rem));
    }
    let mut quot = vec![BigInt::zero(); rem.len() - den.len() + 1];
    while rem.len() >= den.len() {
        let top = rem.last().unwrap();
        let (c, r) = top.div_rem(lead);
        if !r.is_zero() {
            return None;
        }
        let shift = rem.len() - den.len();
        for (i, d) in den.iter().enumerate() {
            rem[shift + i] -= &c * d;
        }
        quot[shift] = c;
        dense_trim(&mut rem);
    }
    Some((quot, rem))
}

fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let c = content(v);
    if c.is_zero() || c.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &c).collect()
}

/// `lc(b)^k * a mod b` with the sign-insensitive primitive remainder sequence.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut rem = a.to_vec();
    let lead = b.last().unwrap().clone();
    while rem.len() >= b.len() {
        let top = rem.last().unwrap().clone();
        let shift = rem.len() - b.len();
        for c in rem.iter_mut() {
            *c *= &lead;
        }
        for (i, d) in b.iter().enumerate() {
            rem[shift + i] -= &top * d;
        }
        dense_trim(&mut rem);
    }
    rem
}

/// Primitive gcd in `Z[q]` with positive leading coefficient.
fn dense_gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut x = primitive(a);
    let mut y = primitive(b);
    dense_trim(&mut x);
    dense_trim(&mut y);
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        let r = pseudo_rem(&x, &y);
        x = y;
        y = primitive(&r);
    }
    if x.last().is_some_and(Signed::is_negative) {
        for c in &mut x {
            *c = -std::mem::take(c);
        }
    }
    x
}

/// An element of `Q(q)` in normalized reduced form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFn {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RationalFn {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        Self {
            num: p,
            den: LaurentPoly::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(LaurentPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn normalize(num: LaurentPoly, den: LaurentPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        // move powers of q into the numerator
        let shift = den.low;
        let num_low = num.low - shift;
        let g = dense_gcd(&num.coeffs, &den.coeffs);
        let (mut n, _) = dense_divmod(&num.coeffs, &g).expect("gcd divides numerator");
        let (mut d, _) = dense_divmod(&den.coeffs, &g).expect("gcd divides denominator");
        let c = content(&n).gcd(&content(&d));
        if !c.is_one() {
            n.iter_mut().for_each(|x| *x /= &c);
            d.iter_mut().for_each(|x| *x /= &c);
        }
        if d.last().unwrap().is_negative() {
            n.iter_mut().for_each(|x| *x = -std::mem::take(x));
            d.iter_mut().for_each(|x| *x = -std::mem::take(x));
        }
        Self {
            num: LaurentPoly::from_raw(num_low, n),
            den: LaurentPoly::from_raw(0, d),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(&self.num * &other.den, &self.den * &other.num))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    pub fn substitute(&self, rule: Substitution) -> Self {
        Self::normalize(self.num.substitute(rule), self.den.substitute(rule))
    }

    pub fn neg_q(&self) -> Self {
        self.substitute(Substitution::Negate)
    }

    /// The polynomial `num/den` when the denominator divides the numerator.
    pub fn as_poly(&self) -> Option<LaurentPoly> {
        self.den.is_one().then(|| self.num.clone())
    }

    pub fn eval_int(&self, x: i64) -> Result<BigRational> {
        let d = self.den.eval_int(x)?;
        if d.is_zero() {
            return Err(Error::Domain(format!("pole at q = {x}")));
        }
        Ok(self.num.eval_int(x)? / d)
    }
}

impl From<LaurentPoly> for RationalFn {
    fn from(p: LaurentPoly) -> Self {
        Self::from_poly(p)
    }
}

impl Add for &RationalFn {
    type Output = RationalFn;
    fn add(self, rhs: &RationalFn) -> RationalFn {
        if self.den == rhs.den {
            return RationalFn::normalize(&self.num + &rhs.num, self.den.clone());
        }
        RationalFn::normalize(&self.num * &rhs.den + &rhs.num * &self.den, &self.den * &rhs.den)
    }
}

impl Sub for &RationalFn {
    type Output = RationalFn;
    fn sub(self, rhs: &RationalFn) -> RationalFn {
        self + &(-rhs)
    }
}

impl Mul for &RationalFn {
    type Output = RationalFn;
    fn mul(self, rhs: &RationalFn) -> RationalFn {
        RationalFn::normalize(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        RationalFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

forward_owned!(Add, add, RationalFn);
forward_owned!(Sub, sub, RationalFn);
forward_owned!(Mul, mul, RationalFn);

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFn({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct RationalFnRepr {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl Serialize for RationalFn {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RationalFnRepr {
            num: self.num.clone(),
            den: self.den.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RationalFn {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = RationalFnRepr::deserialize(deserializer)?;
        let r = RationalFn::new(repr.num.clone(), repr.den.clone()).map_err(de::Error::custom)?;
        if r.num != repr.num || r.den != repr.den {
            return Err(de::Error::custom("rational function is not in normalized form"));
        }
        Ok(r)
    }
}

impl PartialOrd for LaurentPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Arbitrary total order (by exponent range, then coefficients) so polynomials can key sorted maps.
impl Ord for LaurentPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.low
            .cmp(&other.low)
            .then_with(|| self.coeffs.len().cmp(&other.coeffs.len()))
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(low: i64, c: &[i64]) -> LaurentPoly {
        LaurentPoly::from_coeffs(low, c.iter().copied())
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(p(0, &[1, 1]) * p(0, &[1, -1]), p(0, &[1, 0, -1]));
        let x = p(-2, &[3, 0, 1]);
        assert_eq!(&x + &LaurentPoly::zero(), x);
        assert_eq!(p(0, &[1, 1]) * p(0, &[1, 1, 1]), p(0, &[1, 2, 2, 1]));
    }

    #[test]
    fn substitution_examples() {
        assert_eq!(p(0, &[1, 1]).neg_q(), p(0, &[1, -1]));
        assert_eq!(p(0, &[1, 1]).substitute(Substitution::Square), p(0, &[1, 0, 1]));
        assert_eq!(LaurentPoly::monomial(1, 2).bar(), LaurentPoly::monomial(1, -2));
    }

    #[test]
    fn eval_examples() {
        let one = |v: i64| BigRational::from_integer(v.into());
        assert_eq!(p(0, &[1, 1, 1]).eval_int(1).unwrap(), one(3));
        assert_eq!(p(0, &[1, -1, 1]).eval_int(1).unwrap(), one(1));
        assert_eq!(p(-1, &[1, 0, 1]).eval_int(-1).unwrap(), one(-2));
        assert!(p(-1, &[1, 0, 1]).eval_int(0).is_err());
        assert_eq!(p(0, &[5, 1]).eval_int(0).unwrap(), one(5));
    }

    #[test]
    fn ratfn_examples() {
        let a = RationalFn::from_poly(p(1, &[-1, 1]));
        let b = RationalFn::from_poly(p(0, &[1, -1]));
        assert_eq!(a.div(&b).unwrap().as_poly(), Some(p(1, &[-1])));

        let c = RationalFn::new(p(0, &[1, 0, 1]), p(0, &[1, 1])).unwrap();
        assert!(c.as_poly().is_none());
        let d = &c * &RationalFn::from_poly(p(0, &[1, 1]));
        assert_eq!(d.as_poly(), Some(p(0, &[1, 0, 1])));

        assert!(a.div(&RationalFn::zero()).is_err());
        assert!(RationalFn::new(LaurentPoly::one(), LaurentPoly::zero()).is_err());
    }

    #[test]
    fn normalization_is_structural() {
        // (2q^3 + 2q^4) / (-4q^2 - 4q^3) == -q/2
        let r = RationalFn::new(p(3, &[2, 2]), p(2, &[-4, -4])).unwrap();
        assert_eq!(r.num(), &p(1, &[-1]));
        assert_eq!(r.den(), &p(0, &[2]));
        assert!(r.as_poly().is_none());
    }

    #[test]
    fn display_ascending() {
        assert_eq!(p(0, &[1, -2, 2, -2, 1]).to_string(), "1 - 2*q + 2*q^2 - 2*q^3 + q^4");
        assert_eq!(p(-1, &[-1, 0, 3]).to_string(), "-q^-1 + 3*q");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
    }

    #[test]
    fn json_pairs() {
        let x = p(-1, &[2, 0, -3]);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, "[[-1,2],[1,-3]]");
        assert_eq!(serde_json::from_str::<LaurentPoly>(&s).unwrap(), x);
        assert!(serde_json::from_str::<LaurentPoly>("[[1,2],[0,1]]").is_err());
        assert!(serde_json::from_str::<LaurentPoly>("[[1,0]]").is_err());
        let r = RationalFn::new(p(0, &[1, 0, 1]), p(0, &[1, 1])).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, r#"{"num":[[0,1],[2,1]],"den":[[0,1],[1,1]]}"#);
        assert_eq!(serde_json::from_str::<RationalFn>(&s).unwrap(), r);
    }

    fn small_poly() -> impl Strategy<Value = LaurentPoly> {
        (-3i64..3, prop::collection::vec(-4i64..5, 0..5)).prop_map(|(low, c)| p(low, &c))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
        }

        #[test]
        fn negate_twice_is_identity(a in small_poly()) {
            prop_assert_eq!(a.neg_q().neg_q(), a);
        }

        #[test]
        fn ratfn_cancel(a in small_poly(), b in small_poly()) {
            prop_assume!(!b.is_zero());
            let r = RationalFn::new(a.clone(), b.clone()).unwrap();
            let back = &r * &RationalFn::from_poly(b.clone());
            prop_assert_eq!(back, RationalFn::from_poly(a.clone()));
            if let Some(q) = (&a * &b).div_exact(&b) {
                prop_assert_eq!(q, a);
            } else {
                prop_assert!(false, "exact division failed");
            }
        }
    }
}
