//! Plane cubic curves and the chord-tangent operation.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::elliptic::ECPoint;
use crate::exact::mpoly::{MPoly, Monomial, Var};
use crate::exact::rat::{fmt_rat, int, lcm_denominators, Rat, RatStr};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CubicError {
    #[error("zero cubic form")]
    ZeroForm,
    #[error("(0:0:0) is not a projective point")]
    ZeroPoint,
    #[error("point {0} is not on the cubic")]
    NotOnCurve(String),
    #[error("cubic is singular")]
    Singular,
    #[error("cubic is singular at {0}")]
    SingularAt(String),
    #[error("line through {0} and {1} lies on the cubic")]
    LineInCurve(String, String),
}

/// Exponents of `X, Y, Z` in the serialization order.
pub const MONOMIALS: [[u32; 3]; 10] = [
    [3, 0, 0],
    [2, 1, 0],
    [2, 0, 1],
    [1, 2, 0],
    [1, 1, 1],
    [1, 0, 2],
    [0, 3, 0],
    [0, 2, 1],
    [0, 1, 2],
    [0, 0, 3],
];

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjPoint([Rat; 3]);

impl ProjPoint {
    /// Normalizes so the last nonzero coordinate is 1.
    pub fn new(x: Rat, y: Rat, z: Rat) -> Result<Self, CubicError> {
        let mut c = [x, y, z];
        let Some(k) = c.iter().rposition(|v| !v.is_zero()) else {
            return Err(CubicError::ZeroPoint);
        };
        let s = c[k].clone();
        for v in c.iter_mut() {
            *v = &*v / &s;
        }
        Ok(ProjPoint(c))
    }

    pub fn affine(x: Rat, y: Rat) -> Self {
        ProjPoint([x, y, int(1)])
    }

    pub fn coords(&self) -> &[Rat; 3] {
        &self.0
    }

    /// `(X/Z, Y/Z)` when `Z != 0`.
    pub fn dehomogenize(&self) -> Option<(Rat, Rat)> {
        (!self.0[2].is_zero()).then(|| (self.0[0].clone(), self.0[1].clone()))
    }

    pub fn from_ec(p: &ECPoint) -> Self {
        match p {
            ECPoint::Infinity => ProjPoint([int(0), int(1), int(0)]),
            ECPoint::Affine(x, y) => ProjPoint::affine(x.clone(), y.clone()),
        }
    }

    pub fn to_ec(&self) -> ECPoint {
        match self.dehomogenize() {
            Some((x, y)) => ECPoint::Affine(x, y),
            None => ECPoint::Infinity,
        }
    }

    pub fn height_bits(&self) -> u64 {
        self.0
            .iter()
            .map(|c| c.numer().bits().max(c.denom().bits()))
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}:{}:{})",
            fmt_rat(&self.0[0]),
            fmt_rat(&self.0[1]),
            fmt_rat(&self.0[2])
        )
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.iter().map(fmt_rat).collect::<Vec<_>>().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProjPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [x, y, z] = <[RatStr; 3]>::deserialize(d)?;
        ProjPoint::new(x.0, y.0, z.0).map_err(serde::de::Error::custom)
    }
}

type IVec = [BigInt; 3];

/// Primitive-free integer representative: denominators cleared.
fn integral(p: &[Rat; 3]) -> IVec {
    let l = lcm_denominators(p.iter());
    std::array::from_fn(|i| p[i].numer() * (&l / p[i].denom()))
}

fn from_integral(v: IVec) -> Result<ProjPoint, CubicError> {
    let g = v.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    let [x, y, z] = v.map(|c| Rat::from_integer(if g.is_zero() { c } else { c / &g }));
    ProjPoint::new(x, y, z)
}

fn ilin(l: &BigInt, a: &IVec, m: &BigInt, b: &IVec) -> IVec {
    std::array::from_fn(|i| l * &a[i] + m * &b[i])
}

fn icross(a: &IVec, b: &IVec) -> IVec {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn powers(p: &IVec) -> [[BigInt; 4]; 3] {
    std::array::from_fn(|k| {
        let sq = &p[k] * &p[k];
        let cu = &sq * &p[k];
        [BigInt::one(), p[k].clone(), sq, cu]
    })
}

fn eval_int(ic: &[BigInt; 10], p: &IVec) -> BigInt {
    let pw = powers(p);
    ic.iter()
        .zip(MONOMIALS.iter())
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, e)| c * &pw[0][e[0] as usize] * &pw[1][e[1] as usize] * &pw[2][e[2] as usize])
        .sum()
}

fn gradient_int(ic: &[BigInt; 10], p: &IVec) -> IVec {
    let pw = powers(p);
    let mut g: IVec = Default::default();
    for (c, e) in ic.iter().zip(MONOMIALS.iter()) {
        if c.is_zero() {
            continue;
        }
        for k in 0..3 {
            if e[k] == 0 {
                continue;
            }
            let mut v = c * BigInt::from(e[k]);
            for j in 0..3 {
                let ex = if j == k { e[j] - 1 } else { e[j] };
                v *= &pw[j][ex as usize];
            }
            g[k] += v;
        }
    }
    g
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlaneCubic {
    coeffs: [Rat; 10],
}

impl PlaneCubic {
    pub fn new(coeffs: [Rat; 10]) -> Result<Self, CubicError> {
        if coeffs.iter().all(Zero::is_zero) {
            return Err(CubicError::ZeroForm);
        }
        Ok(PlaneCubic { coeffs })
    }

    /// `Y^2 Z - X^3 - A X Z^2 - B Z^3`, with the flex `(0:1:0)`.
    pub fn weierstrass(a: &Rat, b: &Rat) -> Self {
        let mut c: [Rat; 10] = Default::default();
        c[7] = int(1);
        c[0] = int(-1);
        c[5] = -a;
        c[9] = -b;
        PlaneCubic { coeffs: c }
    }

    /// Reads a ternary cubic form in `X, Y, Z`.
    pub fn from_mpoly(p: &MPoly) -> Result<Self, CubicError> {
        let mut c: [Rat; 10] = Default::default();
        for (m, v) in p.terms() {
            let e = [m.exp(Var::BigX), m.exp(Var::BigY), m.exp(Var::BigZ)];
            let i = MONOMIALS
                .iter()
                .position(|mm| *mm == e && m.degree() == 3)
                .ok_or(CubicError::ZeroForm)?;
            c[i] = v.clone();
        }
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[Rat; 10] {
        &self.coeffs
    }

    pub fn to_mpoly(&self) -> MPoly {
        MPoly::from_terms(self.coeffs.iter().zip(MONOMIALS.iter()).map(|(c, e)| {
            let m = Monomial::var(Var::BigX, e[0])
                .mul(&Monomial::var(Var::BigY, e[1]))
                .mul(&Monomial::var(Var::BigZ, e[2]));
            (m, c.clone())
        }))
    }

    pub fn eval(&self, p: &[Rat; 3]) -> Rat {
        self.coeffs
            .iter()
            .zip(MONOMIALS.iter())
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, e)| {
                let mut v = c.clone();
                for (k, &ek) in e.iter().enumerate() {
                    for _ in 0..ek {
                        v *= &p[k];
                    }
                }
                v
            })
            .sum()
    }

    pub fn gradient(&self, p: &[Rat; 3]) -> [Rat; 3] {
        let mut g: [Rat; 3] = Default::default();
        for (c, e) in self.coeffs.iter().zip(MONOMIALS.iter()) {
            if c.is_zero() {
                continue;
            }
            for k in 0..3 {
                if e[k] == 0 {
                    continue;
                }
                let mut v = c * int(e[k] as i64);
                for (j, &ej) in e.iter().enumerate() {
                    let ex = if j == k { ej - 1 } else { ej };
                    for _ in 0..ex {
                        v *= &p[j];
                    }
                }
                g[k] += v;
            }
        }
        g
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        eval_int(&self.int_coeffs(), &integral(&p.0)).is_zero()
    }

    fn check(&self, p: &ProjPoint) -> Result<(), CubicError> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(CubicError::NotOnCurve(p.to_string()))
        }
    }

    /// Resultant of the three partials, up to a nonzero constant.
    ///
    /// Rows are the quadric coefficients of `F_X, F_Y, F_Z` and of the
    /// partials of their Jacobian determinant; the determinant vanishes
    /// exactly when the partials share a projective zero.
    pub fn discriminant(&self) -> Rat {
        let f = self.to_mpoly();
        let vars = [Var::BigX, Var::BigY, Var::BigZ];
        let partials: Vec<MPoly> = vars.iter().map(|&v| f.derivative(v)).collect();
        let h: Vec<Vec<MPoly>> = partials
            .iter()
            .map(|p| vars.iter().map(|&v| p.derivative(v)).collect())
            .collect();
        let jac = &(&h[0][0] * &(&(&h[1][1] * &h[2][2]) - &(&h[1][2] * &h[2][1])))
            - &(&(&h[0][1] * &(&(&h[1][0] * &h[2][2]) - &(&h[1][2] * &h[2][0])))
                - &(&h[0][2] * &(&(&h[1][0] * &h[2][1]) - &(&h[1][1] * &h[2][0]))));
        let quad_basis: [[u32; 3]; 6] = [
            [2, 0, 0],
            [0, 2, 0],
            [0, 0, 2],
            [1, 1, 0],
            [1, 0, 1],
            [0, 1, 1],
        ];
        let row = |q: &MPoly| -> Vec<Rat> {
            quad_basis
                .iter()
                .map(|e| {
                    q.terms()
                        .find(|(m, _)| [m.exp(Var::BigX), m.exp(Var::BigY), m.exp(Var::BigZ)] == *e)
                        .map(|(_, c)| c.clone())
                        .unwrap_or_else(Rat::zero)
                })
                .collect()
        };
        let mut m: Vec<Vec<Rat>> = partials.iter().map(row).collect();
        m.extend(vars.iter().map(|&v| row(&jac.derivative(v))));
        rat_det(m)
    }

    pub fn is_smooth(&self) -> bool {
        !self.discriminant().is_zero()
    }

    /// Coefficients scaled to coprime integers; the curve is unchanged.
    fn int_coeffs(&self) -> [BigInt; 10] {
        let l = lcm_denominators(self.coeffs.iter());
        self.coeffs.clone().map(|c| c.numer() * (&l / c.denom()))
    }

    /// `G(l, m) = F(l a + m b)` as `(c3, 2 c2, 2 c1, c0)` with `G = c3 l^3 + c2 l^2 m + c1 l m^2 + c0 m^3`.
    fn pencil_coeffs(ic: &[BigInt; 10], a: &IVec, b: &IVec) -> (BigInt, BigInt, BigInt, BigInt) {
        let c3 = eval_int(ic, a);
        let c0 = eval_int(ic, b);
        let gp = eval_int(ic, &ilin(&BigInt::one(), a, &BigInt::one(), b));
        let gm = eval_int(ic, &ilin(&BigInt::one(), a, &-BigInt::one(), b));
        let c1 = &gp + &gm - &c3 * 2;
        let c2 = gp - gm - &c0 * 2;
        (c3, c2, c1, c0)
    }

    /// Third intersection of the line `AB` (tangent when `A = B`).
    pub fn chord(&self, a: &ProjPoint, b: &ProjPoint) -> Result<ProjPoint, CubicError> {
        self.check(a)?;
        self.check(b)?;
        self.chord_unchecked(a, b)
    }

    pub fn chord_unchecked(&self, a: &ProjPoint, b: &ProjPoint) -> Result<ProjPoint, CubicError> {
        let ic = self.int_coeffs();
        let ia = integral(&a.0);
        if a != b {
            let ib = integral(&b.0);
            let (_, c2, c1, _) = Self::pencil_coeffs(&ic, &ia, &ib);
            if c1.is_zero() && c2.is_zero() {
                return Err(CubicError::LineInCurve(a.to_string(), b.to_string()));
            }
            return from_integral(ilin(&c1, &ia, &-c2, &ib));
        }
        let g = gradient_int(&ic, &ia);
        if g.iter().all(Zero::is_zero) {
            return Err(CubicError::SingularAt(a.to_string()));
        }
        let e = |i: usize| -> IVec {
            let mut v: IVec = Default::default();
            v[i] = BigInt::one();
            v
        };
        let d = (0..3)
            .map(|i| icross(&g, &e(i)))
            .find(|d| icross(d, &ia).iter().any(|c| !c.is_zero()))
            .expect("tangent line is two-dimensional");
        let (_, _, c1, c0) = Self::pencil_coeffs(&ic, &ia, &d);
        if c1.is_zero() && c0.is_zero() {
            return Err(CubicError::LineInCurve(a.to_string(), a.to_string()));
        }
        from_integral(ilin(&(c0 * 2), &ia, &-c1, &d))
    }

    /// `Q_0 .. Q_N` with `Q_{n+1} = (Q_n * P) * T`, `T = P * P`.
    pub fn chord_sequence(&self, p: &ProjPoint, n: usize) -> Result<Vec<ProjPoint>, CubicError> {
        self.require_smooth()?;
        self.check(p)?;
        let walker = ChordWalker::new(self, p)?;
        let mut out = vec![p.clone()];
        for _ in 0..n {
            let q = walker.next(out.last().expect("nonempty"))?;
            out.push(q);
        }
        Ok(out)
    }

    pub fn require_smooth(&self) -> Result<(), CubicError> {
        if self.is_smooth() {
            Ok(())
        } else {
            Err(CubicError::Singular)
        }
    }
}

/// Steps `Q_n -> Q_{n±1}` for a fixed base point.
#[derive(Clone, Debug)]
pub struct ChordWalker<'a> {
    cubic: &'a PlaneCubic,
    p: ProjPoint,
    t: ProjPoint,
}

impl<'a> ChordWalker<'a> {
    pub fn new(cubic: &'a PlaneCubic, p: &ProjPoint) -> Result<Self, CubicError> {
        cubic.check(p)?;
        let t = cubic.chord_unchecked(p, p)?;
        Ok(ChordWalker {
            cubic,
            p: p.clone(),
            t,
        })
    }

    pub fn tangential(&self) -> &ProjPoint {
        &self.t
    }

    pub fn next(&self, q: &ProjPoint) -> Result<ProjPoint, CubicError> {
        let r = self.cubic.chord_unchecked(q, &self.p)?;
        self.cubic.chord_unchecked(&r, &self.t)
    }

    pub fn prev(&self, q: &ProjPoint) -> Result<ProjPoint, CubicError> {
        let r = self.cubic.chord_unchecked(q, &self.t)?;
        self.cubic.chord_unchecked(&r, &self.p)
    }
}

const PERIOD_DEPTH: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ChordTorsionVerdict {
    TorsionClass { period: u32 },
    NonTorsionClass { points: Vec<ProjPoint> },
}

impl ChordTorsionVerdict {
    pub fn is_non_torsion(&self) -> bool {
        matches!(self, ChordTorsionVerdict::NonTorsionClass { .. })
    }
}

pub fn chord_torsion_test(
    c: &PlaneCubic,
    p: &ProjPoint,
) -> Result<ChordTorsionVerdict, CubicError> {
    let qs = c.chord_sequence(p, PERIOD_DEPTH)?;
    match qs.iter().skip(1).position(|q| q == p) {
        Some(i) => Ok(ChordTorsionVerdict::TorsionClass {
            period: i as u32 + 1,
        }),
        None => Ok(ChordTorsionVerdict::NonTorsionClass { points: qs }),
    }
}

/// Re-checks a chord verdict from scratch.
pub fn verify_chord_verdict(c: &PlaneCubic, p: &ProjPoint, v: &ChordTorsionVerdict) -> bool {
    chord_torsion_test(c, p).is_ok_and(|w| &w == v)
}

fn rat_det(mut m: Vec<Vec<Rat>>) -> Rat {
    let n = m.len();
    let mut det = int(1);
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return Rat::zero();
        };
        if piv != k {
            m.swap(piv, k);
            det = -det;
        }
        det *= &m[k][k];
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] / &m[k][k];
            let (top, bottom) = m.split_at_mut(i);
            for (dst, src) in bottom[0][k..].iter_mut().zip(&top[k][k..]) {
                *dst -= &f * src;
            }
        }
    }
    det
}

impl fmt::Display for PlaneCubic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_mpoly())
    }
}

impl Serialize for PlaneCubic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coeffs
            .iter()
            .map(fmt_rat)
            .collect::<Vec<_>>()
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PlaneCubic {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = <[RatStr; 10]>::deserialize(d)?;
        PlaneCubic::new(v.map(|r| r.0)).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::{ec_mul, WeierstrassCurve};
    use crate::exact::parse::parse_ratfunc;

    fn cubic(s: &str) -> PlaneCubic {
        PlaneCubic::from_mpoly(parse_ratfunc(s).unwrap().num()).unwrap()
    }

    fn pp(x: i64, y: i64, z: i64) -> ProjPoint {
        ProjPoint::new(int(x), int(y), int(z)).unwrap()
    }

    #[test]
    fn smoothness() {
        assert!(cubic("Y^2Z-X^3+XZ^2").is_smooth());
        assert!(!cubic("Y^2Z-X^3").is_smooth());
        assert!(cubic("X^3+Y^3+Z^3").is_smooth());
        assert!(!cubic("Y^2Z-X^3-X^2Z").is_smooth()); // node
        assert!(!cubic("X(X^2+Y^2-Z^2)").is_smooth()); // line and conic
                                                       // Weierstrass case: proportional to 4A^3 + 27B^2
        let d = PlaneCubic::weierstrass(&int(-1), &int(0)).discriminant();
        assert_eq!(d, int(-221184) * int(-4));
    }

    #[test]
    fn chord_examples() {
        let c = cubic("Y^2Z-X^3+XZ^2");
        let a = pp(0, 0, 1);
        assert_eq!(c.chord(&a, &pp(1, 0, 1)).unwrap(), pp(-1, 0, 1));
        let t = c.chord(&a, &a).unwrap();
        assert_eq!(t, pp(0, 1, 0));
        assert_eq!(c.chord(&a, &t).unwrap(), a);
        assert!(c.chord(&a, &pp(1, 1, 1)).is_err());
    }

    #[test]
    fn flex_is_its_own_tangential() {
        let c = cubic("Y^2Z-X^3+XZ^2");
        let o = pp(0, 1, 0);
        assert_eq!(c.chord(&o, &o).unwrap(), o);
    }

    #[test]
    fn sequence_examples() {
        let c = cubic("Y^2Z-X^3+XZ^2");
        let p = pp(0, 0, 1);
        assert_eq!(c.chord_sequence(&p, 0).unwrap(), vec![p.clone()]);
        let qs = c.chord_sequence(&p, 2).unwrap();
        assert_eq!(qs[1], pp(0, 1, 0));
        assert_eq!(qs[2], p);
        assert_eq!(
            chord_torsion_test(&c, &p).unwrap(),
            ChordTorsionVerdict::TorsionClass { period: 2 }
        );
    }

    #[test]
    fn sequence_matches_group_law() {
        let e = WeierstrassCurve::from_ints(0, 1).unwrap();
        let c = PlaneCubic::weierstrass(e.a(), e.b());
        let p = ECPoint::Affine(int(2), int(3));
        let qs = c.chord_sequence(&ProjPoint::from_ec(&p), 3).unwrap();
        for (n, q) in qs.iter().enumerate() {
            assert_eq!(q.to_ec(), ec_mul(&e, 3 * n as i64 + 1, &p).unwrap());
        }
        assert!(!chord_torsion_test(&c, &ProjPoint::from_ec(&p))
            .unwrap()
            .is_non_torsion());
        let e = WeierstrassCurve::from_ints(0, -2).unwrap();
        let c = PlaneCubic::weierstrass(e.a(), e.b());
        assert!(chord_torsion_test(&c, &pp(3, 5, 1))
            .unwrap()
            .is_non_torsion());
    }

    #[test]
    fn walker_reverses() {
        let c = PlaneCubic::weierstrass(&int(0), &int(-2));
        let p = pp(3, 5, 1);
        let w = ChordWalker::new(&c, &p).unwrap();
        let q1 = w.next(&p).unwrap();
        assert_eq!(w.prev(&q1).unwrap(), p);
        let qm1 = w.prev(&p).unwrap();
        assert_eq!(w.next(&qm1).unwrap(), p);
    }

    #[test]
    fn json_form() {
        let c = PlaneCubic::weierstrass(&int(-1), &int(0));
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"["-1","0","0","0","0","1","0","1","0","0"]"#);
        let back: PlaneCubic = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
}
