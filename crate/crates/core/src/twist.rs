//! Classes in `Q*/(Q*)^k` and simultaneous twists with rational points.

use num_bigint::{BigUint, Sign};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::exact::rat::{fmt_rat, pow, Rat, RatStr};
use crate::factor::{self, FactorError};
use crate::family::{Coeffs, FamilyError, ParamFamily, Variant};
use crate::surface::QuotientSurface;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TwistError {
    #[error("zero has no class")]
    Zero,
    #[error("k must be at least 2")]
    BadK,
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("class of f(t(u)) differs from class of g(x(u)) at u = {0}")]
    ClassMismatch(String),
    #[error("surface is in an excluded case (a = c = 0 or b = d = 0)")]
    Excluded,
    #[error("family does not match the surface: {0}")]
    Mismatch(String),
}

/// A prime written as a JSON number when it fits in 64 bits, else as a string.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(pub BigUint);

impl Serialize for Prime {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_u64() {
            Some(p) => s.serialize_u64(p),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Prime {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(n) => Ok(Prime(BigUint::from(n))),
            Raw::S(s) => s.parse().map(Prime).map_err(D::Error::custom),
        }
    }
}

/// Canonical representative `sign * prod p^e` with `1 <= e < k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KthPowerFreeClass {
    pub k: u32,
    pub sign: i8,
    pub factors: Vec<(Prime, u32)>,
}

impl KthPowerFreeClass {
    pub fn is_trivial(&self) -> bool {
        self.sign == 1 && self.factors.is_empty()
    }

    /// The canonical representative as a rational (an integer).
    pub fn representative(&self) -> Rat {
        let mut v = Rat::from_integer(self.sign.into());
        for (p, e) in &self.factors {
            v *= pow(&Rat::from_integer(p.0.clone().into()), *e);
        }
        v
    }
}

pub fn kth_power_free_class(q: &Rat, k: u32) -> Result<KthPowerFreeClass, TwistError> {
    kth_power_free_class_with(q, k, factor::bit_bound_from_env())
}

pub fn kth_power_free_class_with(
    q: &Rat,
    k: u32,
    bits: u64,
) -> Result<KthPowerFreeClass, TwistError> {
    if k < 2 {
        return Err(TwistError::BadK);
    }
    if q.is_zero() {
        return Err(TwistError::Zero);
    }
    let num = factor::factor(q.numer().magnitude(), bits)?;
    let den = factor::factor(q.denom().magnitude(), bits)?;
    let mut exps: Vec<(BigUint, u32)> = Vec::new();
    for (p, e) in num {
        exps.push((p, e % k));
    }
    for (p, e) in den {
        // p^{-e} is p^{(-e) mod k} modulo k-th powers
        let r = (k - e % k) % k;
        match exps.iter_mut().find(|(x, _)| *x == p) {
            Some(entry) => entry.1 = (entry.1 + r) % k,
            None => exps.push((p, r)),
        }
    }
    let mut factors: Vec<(Prime, u32)> = exps
        .into_iter()
        .filter(|(_, e)| *e > 0)
        .map(|(p, e)| (Prime(p), e))
        .collect();
    factors.sort();
    let negative = q.numer().sign() == Sign::Minus;
    let sign = if negative && k.is_even() { -1 } else { 1 };
    Ok(KthPowerFreeClass { k, sign, factors })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistPairWitness {
    pub u: RatStr,
    /// `l = f(t(u)) = g(x(u)) / y(u)^k`.
    pub l: RatStr,
    pub class: KthPowerFreeClass,
    /// `(x, y1)` with `l y1^k = x^n + ax + b`.
    pub point1: (RatStr, RatStr),
    /// `(t, y2)` with `l y2^k = t^n + ct + d`.
    pub point2: (RatStr, RatStr),
}

impl TwistPairWitness {
    /// Re-checks both point equations by substitution.
    pub fn verify(&self, s: &QuotientSurface) -> bool {
        let l = &self.l.0;
        let k = s.k;
        let (x, y1) = (&self.point1.0 .0, &self.point1.1 .0);
        let (t, y2) = (&self.point2.0 .0, &self.point2.1 .0);
        !l.is_zero()
            && l * pow(y1, k) == s.g().eval(x)
            && l * pow(y2, k) == s.f().eval(t)
            && kth_power_free_class(l, k).is_ok_and(|c| c == self.class)
    }
}

fn family_for(s: &QuotientSurface, f: &ParamFamily) -> Result<Coeffs, TwistError> {
    match f.variant {
        Variant::General { k, n } if k == s.k && n == s.n => Ok(Coeffs::new(
            s.a.clone(),
            s.b.clone(),
            s.c.clone(),
            s.d.clone(),
        )),
        v => Err(TwistError::Mismatch(format!(
            "{v} on a surface with k = {}, n = {}",
            s.k, s.n
        ))),
    }
}

/// Class of `f(t(u))`, cross-checked against the class of `g(x(u))`.
pub fn twist_class_of_u(
    s: &QuotientSurface,
    f: &ParamFamily,
    u: &Rat,
) -> Result<(KthPowerFreeClass, Rat), TwistError> {
    let w = witness_for(s, f, u)?;
    Ok((w.class, w.l.0))
}

fn witness_for(
    s: &QuotientSurface,
    f: &ParamFamily,
    u: &Rat,
) -> Result<TwistPairWitness, TwistError> {
    let co = family_for(s, f)?;
    let (x, y, t) = f.eval(&co, u)?;
    let l = s.f().eval(&t);
    if l.is_zero() {
        return Err(TwistError::Zero);
    }
    let class = kth_power_free_class(&l, s.k)?;
    let gx = s.g().eval(&x);
    if kth_power_free_class(&gx, s.k)? != class {
        return Err(TwistError::ClassMismatch(fmt_rat(u)));
    }
    Ok(TwistPairWitness {
        u: RatStr(u.clone()),
        l: RatStr(l),
        class,
        point1: (RatStr(x), RatStr(y)),
        point2: (RatStr(t), RatStr(Rat::from_integer(1.into()))),
    })
}

/// All `p/q` of height exactly `h`, in enumeration order.
pub fn height_shell(h: u64) -> Vec<Rat> {
    let mut out = Vec::new();
    let h = h as i64;
    let mut push = |p: i64, q: i64| {
        if p != 0 && p.unsigned_abs().gcd(&(q as u64)) == 1 {
            out.push(Rat::new(p.into(), q.into()));
        }
    };
    // order: |p| ascending, then + before -, then q ascending
    for ap in 1..=h {
        for sgn in [1i64, -1] {
            if ap == h {
                for q in 1..=h {
                    push(sgn * ap, q);
                }
            } else {
                push(sgn * ap, h);
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistSearch {
    pub witnesses: Vec<TwistPairWitness>,
    /// Fewer than the requested number of classes were found.
    pub shortfall: bool,
    pub candidates_tried: usize,
    pub candidates_skipped: usize,
}

pub fn simultaneous_twists(
    s: &QuotientSurface,
    f: &ParamFamily,
    want: usize,
    height_bound: u64,
) -> Result<TwistSearch, TwistError> {
    if s.flags().excluded_case {
        return Err(TwistError::Excluded);
    }
    family_for(s, f)?;
    let mut out = TwistSearch {
        witnesses: Vec::new(),
        shortfall: false,
        candidates_tried: 0,
        candidates_skipped: 0,
    };
    let mut seen = std::collections::HashSet::new();
    for h in 1..=height_bound {
        if out.witnesses.len() >= want {
            break;
        }
        let shell = height_shell(h);
        let results: Vec<Result<TwistPairWitness, TwistError>> =
            shell.par_iter().map(|u| witness_for(s, f, u)).collect();
        for r in results {
            if out.witnesses.len() >= want {
                break;
            }
            out.candidates_tried += 1;
            match r {
                Ok(w) => {
                    debug_assert!(w.verify(s));
                    if seen.insert(w.class.clone()) {
                        out.witnesses.push(w);
                    }
                }
                Err(e) => {
                    log::debug!("skipping candidate: {e}");
                    out.candidates_skipped += 1;
                }
            }
        }
    }
    out.shortfall = out.witnesses.len() < want;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::{int, rat};
    use crate::family::build_family;

    fn class(sign: i8, k: u32, f: &[(u64, u32)]) -> KthPowerFreeClass {
        KthPowerFreeClass {
            k,
            sign,
            factors: f.iter().map(|&(p, e)| (Prime(p.into()), e)).collect(),
        }
    }

    #[test]
    fn class_examples() {
        assert_eq!(
            kth_power_free_class(&int(18), 2).unwrap(),
            class(1, 2, &[(2, 1)])
        );
        assert_eq!(
            kth_power_free_class(&rat(4, 9), 2).unwrap(),
            class(1, 2, &[])
        );
        assert_eq!(kth_power_free_class(&int(-8), 3).unwrap(), class(1, 3, &[]));
        assert_eq!(
            kth_power_free_class(&int(-9), 2).unwrap(),
            class(-1, 2, &[])
        );
        assert_eq!(
            kth_power_free_class(&rat(1, 2), 3).unwrap(),
            class(1, 3, &[(2, 2)])
        );
        assert!(kth_power_free_class(&int(0), 2).is_err());
    }

    #[test]
    fn class_json() {
        let c = kth_power_free_class(&int(-3), 2).unwrap();
        assert_eq!(
            serde_json::to_string(&c).unwrap(),
            r#"{"k":2,"sign":-1,"factors":[[3,1]]}"#
        );
    }

    #[test]
    fn class_of_u() {
        let s = QuotientSurface::from_ints(2, 3, 1, 1, 2, 3).unwrap();
        let f = build_family(Variant::General { k: 2, n: 3 }).unwrap();
        let (c, l) = twist_class_of_u(&s, &f, &int(1)).unwrap();
        assert_eq!((c, l), (class(-1, 2, &[]), int(-9)));
        let x = QuotientSurface::from_ints(3, 4, 1, 1, 2, 3).unwrap();
        let fx = build_family(Variant::General { k: 3, n: 4 }).unwrap();
        let (c, l) = twist_class_of_u(&x, &fx, &int(1)).unwrap();
        assert_eq!((c, l), (class(1, 3, &[(3, 1), (5, 1)]), int(15)));
    }

    #[test]
    fn shells_are_ordered() {
        assert_eq!(height_shell(1), vec![int(1), int(-1)]);
        assert_eq!(
            height_shell(2),
            vec![rat(1, 2), rat(-1, 2), int(2), int(-2)]
        );
    }

    #[test]
    fn first_witness() {
        let s = QuotientSurface::from_ints(2, 3, 1, 1, 2, 3).unwrap();
        let f = build_family(Variant::General { k: 2, n: 3 }).unwrap();
        let r = simultaneous_twists(&s, &f, 1, 5).unwrap();
        let w = &r.witnesses[0];
        assert_eq!(w.l.0, int(-9));
        assert_eq!(
            (w.point1.0 .0.clone(), w.point1.1 .0.clone()),
            (int(-2), int(1))
        );
        assert_eq!(
            (w.point2.0 .0.clone(), w.point2.1 .0.clone()),
            (int(-2), int(1))
        );
        assert!(w.verify(&s));
        assert!(simultaneous_twists(&s, &f, 0, 5)
            .unwrap()
            .witnesses
            .is_empty());
    }
}
