//! Short Weierstrass curves `y^2 = x^3 + Ax + B` over the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::exact::rat::{fmt_rat, int, is_integral, parse_rat, Rat, RatStr};
use crate::factor;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EllipticError {
    #[error("singular curve: 4A^3 + 27B^2 = 0")]
    Singular,
    #[error("point {0} is not on the curve")]
    NotOnCurve(String),
    #[error("twist by zero")]
    TwistByZero,
    #[error("torsion test needs an affine point")]
    PointAtInfinity,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeierstrassCurve {
    a: Rat,
    b: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ECPoint {
    Infinity,
    Affine(Rat, Rat),
}

impl ECPoint {
    pub fn affine(x: Rat, y: Rat) -> Self {
        ECPoint::Affine(x, y)
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, ECPoint::Infinity)
    }

    pub fn neg(&self) -> ECPoint {
        match self {
            ECPoint::Infinity => ECPoint::Infinity,
            ECPoint::Affine(x, y) => ECPoint::Affine(x.clone(), -y),
        }
    }

    pub fn x(&self) -> Option<&Rat> {
        match self {
            ECPoint::Infinity => None,
            ECPoint::Affine(x, _) => Some(x),
        }
    }

    pub fn y(&self) -> Option<&Rat> {
        match self {
            ECPoint::Infinity => None,
            ECPoint::Affine(_, y) => Some(y),
        }
    }
}

impl fmt::Display for ECPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ECPoint::Infinity => f.write_str("inf"),
            ECPoint::Affine(x, y) => write!(f, "({}, {})", fmt_rat(x), fmt_rat(y)),
        }
    }
}

impl Serialize for ECPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ECPoint::Infinity => s.serialize_str("inf"),
            ECPoint::Affine(x, y) => [fmt_rat(x), fmt_rat(y)].serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for ECPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Inf(String),
            Pair(RatStr, RatStr),
        }
        match Raw::deserialize(d)? {
            Raw::Inf(s) if s == "inf" => Ok(ECPoint::Infinity),
            Raw::Inf(s) => Err(D::Error::custom(format!(
                "expected \"inf\" or a pair, got {s:?}"
            ))),
            Raw::Pair(x, y) => Ok(ECPoint::Affine(x.0, y.0)),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CurveJson {
    #[serde(rename = "A")]
    a: String,
    #[serde(rename = "B")]
    b: String,
}

impl Serialize for WeierstrassCurve {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CurveJson {
            a: fmt_rat(&self.a),
            b: fmt_rat(&self.b),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeierstrassCurve {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = CurveJson::deserialize(d)?;
        let a = parse_rat(&j.a).map_err(D::Error::custom)?;
        let b = parse_rat(&j.b).map_err(D::Error::custom)?;
        WeierstrassCurve::new(a, b).map_err(D::Error::custom)
    }
}

impl fmt::Display for WeierstrassCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "y^2 = x^3 + ({})x + ({})",
            fmt_rat(&self.a),
            fmt_rat(&self.b)
        )
    }
}

impl WeierstrassCurve {
    pub fn new(a: Rat, b: Rat) -> Result<Self, EllipticError> {
        let e = WeierstrassCurve { a, b };
        if e.disc_core().is_zero() {
            return Err(EllipticError::Singular);
        }
        Ok(e)
    }

    pub fn from_ints(a: i64, b: i64) -> Result<Self, EllipticError> {
        Self::new(int(a), int(b))
    }

    pub fn a(&self) -> &Rat {
        &self.a
    }

    pub fn b(&self) -> &Rat {
        &self.b
    }

    /// `4A^3 + 27B^2`.
    pub fn disc_core(&self) -> Rat {
        int(4) * &self.a * &self.a * &self.a + int(27) * &self.b * &self.b
    }

    /// `-16(4A^3 + 27B^2)`.
    pub fn discriminant(&self) -> Rat {
        int(-16) * self.disc_core()
    }

    pub fn rhs(&self, x: &Rat) -> Rat {
        x * x * x + &self.a * x + &self.b
    }

    pub fn contains(&self, p: &ECPoint) -> bool {
        match p {
            ECPoint::Infinity => true,
            ECPoint::Affine(x, y) => y * y == self.rhs(x),
        }
    }

    fn check(&self, p: &ECPoint) -> Result<(), EllipticError> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(EllipticError::NotOnCurve(p.to_string()))
        }
    }

    /// Group law without membership checks.
    pub fn add_unchecked(&self, p: &ECPoint, q: &ECPoint) -> ECPoint {
        let (ECPoint::Affine(x1, y1), ECPoint::Affine(x2, y2)) = (p, q) else {
            return if p.is_infinity() {
                q.clone()
            } else {
                p.clone()
            };
        };
        let lambda = if x1 == x2 {
            if (y1 + y2).is_zero() {
                return ECPoint::Infinity;
            }
            (int(3) * x1 * x1 + &self.a) / (int(2) * y1)
        } else {
            (y2 - y1) / (x2 - x1)
        };
        let x3 = &lambda * &lambda - x1 - x2;
        let y3 = &lambda * (x1 - &x3) - y1;
        ECPoint::Affine(x3, y3)
    }

    pub fn mul_unchecked(&self, n: i64, p: &ECPoint) -> ECPoint {
        let mut base = if n < 0 { p.neg() } else { p.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = ECPoint::Infinity;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add_unchecked(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.add_unchecked(&base, &base);
            }
        }
        acc
    }
}

pub fn ec_add(e: &WeierstrassCurve, p: &ECPoint, q: &ECPoint) -> Result<ECPoint, EllipticError> {
    e.check(p)?;
    e.check(q)?;
    Ok(e.add_unchecked(p, q))
}

pub fn ec_mul(e: &WeierstrassCurve, n: i64, p: &ECPoint) -> Result<ECPoint, EllipticError> {
    e.check(p)?;
    Ok(e.mul_unchecked(n, p))
}

/// Smallest positive integer `l` with `l^4 A` and `l^6 B` integral.
fn integral_scale(a: &Rat, b: &Rat) -> BigInt {
    let da = a.denom().clone();
    let db = b.denom().clone();
    let l = da.lcm(&db);
    if l.is_one() {
        return l;
    }
    let bits = factor::bit_bound_from_env();
    match factor::factor(l.magnitude(), bits) {
        Ok(fs) => fs.iter().fold(BigInt::one(), |acc, (p, _)| {
            let p = BigInt::from(p.clone());
            let va = valuation(&da, &p);
            let vb = valuation(&db, &p);
            let e = va.div_ceil(4).max(vb.div_ceil(6));
            acc * p.pow(e)
        }),
        Err(err) => {
            log::warn!("integral model: {err}; using the denominator lcm");
            l
        }
    }
}

fn valuation(n: &BigInt, p: &BigInt) -> u32 {
    let mut m = n.clone();
    let mut v = 0;
    while !m.is_zero() && (&m % p).is_zero() {
        m /= p;
        v += 1;
    }
    v
}

/// Returns `(E', P', l)` with `E': y^2 = x^3 + l^4 A x + l^6 B` and `P' = (l^2 x, l^3 y)`.
pub fn to_integral_model(e: &WeierstrassCurve, p: &ECPoint) -> (WeierstrassCurve, ECPoint, Rat) {
    let l = Rat::from_integer(integral_scale(&e.a, &e.b));
    let l2 = &l * &l;
    let l3 = &l2 * &l;
    let curve = WeierstrassCurve {
        a: &e.a * &l2 * &l2,
        b: &e.b * &l3 * &l3,
    };
    let pt = match p {
        ECPoint::Infinity => ECPoint::Infinity,
        ECPoint::Affine(x, y) => ECPoint::Affine(x * &l2, y * &l3),
    };
    (curve, pt, l)
}

/// Transport `(x, y) -> (q x, q^2 y)` from `q y^2 = x^3 + Ax + B` to the twist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistMap {
    pub q: Rat,
}

impl TwistMap {
    pub fn forward(&self, x: &Rat, y: &Rat) -> ECPoint {
        ECPoint::Affine(&self.q * x, &self.q * &self.q * y)
    }

    pub fn backward(&self, p: &ECPoint) -> Option<(Rat, Rat)> {
        match p {
            ECPoint::Infinity => None,
            ECPoint::Affine(x, y) => Some((x / &self.q, y / (&self.q * &self.q))),
        }
    }
}

/// `Y^2 = X^3 + q^2 A X + q^3 B`.
pub fn quadratic_twist(
    e: &WeierstrassCurve,
    q: &Rat,
) -> Result<(WeierstrassCurve, TwistMap), EllipticError> {
    if q.is_zero() {
        return Err(EllipticError::TwistByZero);
    }
    let q2 = q * q;
    let curve = WeierstrassCurve {
        a: &e.a * &q2,
        b: &e.b * &q2 * q,
    };
    Ok((curve, TwistMap { q: q.clone() }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NonTorsionMethod {
    LutzNagellNonIntegral,
    MazurMultiples,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum TorsionVerdict {
    Torsion {
        order: u32,
    },
    NonTorsion {
        method: NonTorsionMethod,
        evidence: String,
    },
}

impl TorsionVerdict {
    pub fn is_torsion(&self) -> bool {
        matches!(self, TorsionVerdict::Torsion { .. })
    }
}

const MAX_TORSION_ORDER: u32 = 12;

fn integral_point(p: &ECPoint) -> bool {
    match p {
        ECPoint::Infinity => true,
        ECPoint::Affine(x, y) => is_integral(x) && is_integral(y),
    }
}

pub fn torsion_test(e: &WeierstrassCurve, p: &ECPoint) -> Result<TorsionVerdict, EllipticError> {
    if p.is_infinity() {
        return Err(EllipticError::PointAtInfinity);
    }
    e.check(p)?;
    let (e, p, _) = to_integral_model(e, p);
    let non_integral = |what: &str, q: &ECPoint| TorsionVerdict::NonTorsion {
        method: NonTorsionMethod::LutzNagellNonIntegral,
        evidence: format!("{what} = {q} is not integral on the integral model {e}"),
    };
    if !integral_point(&p) {
        return Ok(non_integral("P", &p));
    }
    let p2 = e.add_unchecked(&p, &p);
    if !integral_point(&p2) {
        return Ok(non_integral("2P", &p2));
    }
    let y = p.y().expect("affine");
    if !y.is_zero() {
        let d = e.disc_core().to_integer();
        let y2 = (y * y).to_integer();
        if !(d % &y2).is_zero() {
            return Ok(TorsionVerdict::NonTorsion {
                method: NonTorsionMethod::LutzNagellNonIntegral,
                evidence: format!("y^2 = {y2} does not divide 4A^3+27B^2 = {}", e.disc_core()),
            });
        }
    }
    Ok(multiples_verdict(&e, &p))
}

fn multiples_verdict(e: &WeierstrassCurve, p: &ECPoint) -> TorsionVerdict {
    let mut q = p.clone();
    for n in 2..=MAX_TORSION_ORDER {
        q = e.add_unchecked(&q, p);
        if q.is_infinity() {
            return TorsionVerdict::Torsion { order: n };
        }
    }
    TorsionVerdict::NonTorsion {
        method: NonTorsionMethod::MazurMultiples,
        evidence: format!("nP != O for n <= {MAX_TORSION_ORDER}"),
    }
}

/// Reference verdict from explicit multiples only, without integrality shortcuts.
pub fn torsion_order_brute_force(e: &WeierstrassCurve, p: &ECPoint) -> Option<u32> {
    let (e, p, _) = to_integral_model(e, p);
    (1..=MAX_TORSION_ORDER).find(|&n| e.mul_unchecked(n as i64, &p).is_infinity())
}

/// Naive height bound used by callers to reject huge points early.
pub fn naive_height_bits(p: &ECPoint) -> u64 {
    match p {
        ECPoint::Infinity => 0,
        ECPoint::Affine(x, _) => x.numer().bits().max(x.denom().bits()),
    }
}
