//! Rational helpers on top of `num_rational::BigRational`.
//!
//! `BigRational` already keeps values reduced with a positive denominator,
//! which is exactly the canonical form used throughout the crate.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ExactError;

pub type Rat = BigRational;

/// `n/d` as a rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"n"`, `"-n"` or `"p/q"`.
pub fn parse_rat(s: &str) -> Result<Rat, ExactError> {
    let s = s.trim();
    let bad = || ExactError::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        None => BigInt::from_str(s)
            .map(Rat::from_integer)
            .map_err(|_| bad()),
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(ExactError::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(n, d))
        }
    }
}

/// Canonical text form: `"n"` for integers, `"p/q"` otherwise.
pub fn fmt_rat(q: &Rat) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn sign(q: &Rat) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

/// Bit size of the larger of numerator and denominator; a cheap height proxy.
pub fn height_bits(q: &Rat) -> u64 {
    q.numer().bits().max(q.denom().bits())
}

pub fn is_integral(q: &Rat) -> bool {
    q.denom().is_one()
}

pub fn pow(q: &Rat, e: u32) -> Rat {
    num_traits::pow(q.clone(), e as usize)
}

/// Least common multiple of the denominators.
pub fn lcm_denominators<'a>(qs: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    qs.into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Midpoint of two rationals.
pub fn midpoint(a: &Rat, b: &Rat) -> Rat {
    (a + b) / int(2)
}

/// Simplest rational (least denominator, then least numerator) in the open
/// interval `(lo, hi)`; `None` bounds are infinite. Requires `lo < hi`.
pub fn simplest_in_open(lo: Option<&Rat>, hi: Option<&Rat>) -> Rat {
    match (lo, hi) {
        (None, None) => Rat::zero(),
        (None, Some(h)) if h.is_positive() => Rat::zero(),
        (None, Some(h)) => -simplest_in_open(Some(&-h), None),
        (Some(l), None) if l.is_negative() => Rat::zero(),
        (Some(l), None) => l.floor() + Rat::one(),
        (Some(l), Some(h)) => {
            if l.is_negative() && h.is_positive() {
                return Rat::zero();
            }
            if !h.is_positive() {
                return -simplest_in_open(Some(&-h), Some(&-l));
            }
            let fl = l.floor();
            let next = &fl + Rat::one();
            if &next < h {
                return next;
            }
            let lo_frac = l - &fl;
            let hi_frac = h - &fl;
            let inv_hi = hi_frac.recip();
            let inv_lo = (!lo_frac.is_zero()).then(|| lo_frac.recip());
            fl + simplest_in_open(Some(&inv_hi), inv_lo.as_ref()).recip()
        }
    }
}

/// Simplest rational in the closed interval `[lo, hi]`; requires `lo <= hi`.
pub fn simplest_in_closed(lo: Option<&Rat>, hi: Option<&Rat>) -> Rat {
    match (lo, hi) {
        (None, None) => Rat::zero(),
        (None, Some(h)) if !h.is_negative() => Rat::zero(),
        (None, Some(h)) => -simplest_in_closed(Some(&-h), None),
        (Some(l), None) if !l.is_positive() => Rat::zero(),
        (Some(l), None) => l.ceil(),
        (Some(l), Some(h)) => {
            if !l.is_positive() && !h.is_negative() {
                return Rat::zero();
            }
            if h.is_negative() {
                return -simplest_in_closed(Some(&-h), Some(&-l));
            }
            let fl = l.floor();
            if &fl == l {
                return fl;
            }
            let next = &fl + Rat::one();
            if &next <= h {
                return next;
            }
            let inv_hi = (h - &fl).recip();
            let inv_lo = (l - &fl).recip();
            fl + simplest_in_closed(Some(&inv_hi), Some(&inv_lo)).recip()
        }
    }
}

/// Serde adapter writing a rational as its canonical string.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatStr(pub Rat);

impl From<Rat> for RatStr {
    fn from(q: Rat) -> Self {
        RatStr(q)
    }
}

impl fmt::Display for RatStr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_rat(&self.0))
    }
}

impl Serialize for RatStr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rat(&self.0))
    }
}

impl<'de> Deserialize<'de> for RatStr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        // Accept plain JSON integers as well as strings.
        let v = serde_json::Value::deserialize(d)?;
        let s = match &v {
            serde_json::Value::String(s) => s.clone(),
            serde_json::Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
            _ => {
                return Err(serde::de::Error::custom(format!(
                    "expected rational, got {v}"
                )))
            }
        };
        parse_rat(&s).map(RatStr).map_err(serde::de::Error::custom)
    }
}
