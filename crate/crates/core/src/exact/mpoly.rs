//! Sparse multivariate polynomials over the rationals.
//!
//! Every polynomial lives in the same fixed variable set
//! `a, b, c, d, u, x, y, t, X, Y, Z`; terms are kept in graded
//! lexicographic order with that variable order (a largest).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rat::{fmt_rat, Rat, RatStr};
use super::upoly::UPoly;
use super::ExactError;

pub const NVARS: usize = 11;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    A,
    B,
    C,
    D,
    U,
    X,
    Y,
    T,
    BigX,
    BigY,
    BigZ,
}

impl Var {
    pub const ALL: [Var; NVARS] = [
        Var::A,
        Var::B,
        Var::C,
        Var::D,
        Var::U,
        Var::X,
        Var::Y,
        Var::T,
        Var::BigX,
        Var::BigY,
        Var::BigZ,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> char {
        match self {
            Var::A => 'a',
            Var::B => 'b',
            Var::C => 'c',
            Var::D => 'd',
            Var::U => 'u',
            Var::X => 'x',
            Var::Y => 'y',
            Var::T => 't',
            Var::BigX => 'X',
            Var::BigY => 'Y',
            Var::BigZ => 'Z',
        }
    }

    pub fn from_name(c: char) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == c)
    }
}

/// Exponent vector indexed by [`Var::index`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [u32; NVARS]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; NVARS])
    }

    pub fn var(v: Var, e: u32) -> Self {
        let mut m = [0; NVARS];
        m[v.index()] = e;
        Monomial(m)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.0[v.index()]
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut m = self.0;
        for (a, b) in m.iter_mut().zip(o.0) {
            *a += b;
        }
        Monomial(m)
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.0.iter().zip(o.0).all(|(a, b)| *a <= b)
    }

    /// `o / self`; caller guarantees divisibility.
    pub fn div_into(&self, o: &Monomial) -> Monomial {
        let mut m = o.0;
        for (a, b) in m.iter_mut().zip(self.0) {
            *a -= b;
        }
        Monomial(m)
    }

    pub fn gcd(&self, o: &Monomial) -> Monomial {
        let mut m = self.0;
        for (a, b) in m.iter_mut().zip(o.0) {
            *a = (*a).min(b);
        }
        Monomial(m)
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree()
            .cmp(&o.degree())
            .then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct MPoly {
    terms: BTreeMap<Monomial, Rat>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn int(n: i64) -> Self {
        Self::constant(super::rat::int(n))
    }

    pub fn var(v: Var) -> Self {
        Self::term(Rat::one(), Monomial::var(v, 1))
    }

    pub fn term(c: Rat, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut p = MPoly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    /// Embeds a univariate polynomial in variable `v`.
    pub fn from_upoly(p: &UPoly, v: Var) -> Self {
        Self::from_terms(
            p.coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| (Monomial::var(v, k as u32), c.clone())),
        )
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn constant_value(&self) -> Option<Rat> {
        if self.is_zero() {
            return Some(Rat::zero());
        }
        if !self.is_constant() {
            return None;
        }
        self.terms.values().next().cloned()
    }

    /// Leading term under graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn lc(&self) -> Rat {
        self.leading()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rat::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    /// Variables that actually occur, in the fixed order.
    pub fn variables(&self) -> Vec<Var> {
        Var::ALL
            .into_iter()
            .filter(|v| self.terms.keys().any(|m| m.exp(*v) > 0))
            .collect()
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exp(v) > 0)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, a)| (k.mul(m), a.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = MPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, v: Var) -> Self {
        Self::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let e = m.exp(v);
            (e > 0).then(|| {
                let mut n = *m;
                n.0[v.index()] -= 1;
                (n, c * super::rat::int(e as i64))
            })
        }))
    }

    /// Evaluates with every occurring variable assigned.
    pub fn eval(&self, assign: &dyn Fn(Var) -> Option<Rat>) -> Result<Rat, ExactError> {
        let mut values: [Option<Rat>; NVARS] = Default::default();
        for v in self.variables() {
            values[v.index()] = Some(assign(v).ok_or(ExactError::Unassigned(v.name()))?);
        }
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for v in Var::ALL {
                let e = m.exp(v);
                if e > 0 {
                    t *= super::rat::pow(values[v.index()].as_ref().unwrap(), e);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Substitutes a rational for one variable.
    pub fn specialize(&self, v: Var, q: &Rat) -> Self {
        let mut powers: Vec<Rat> = vec![Rat::one()];
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * q;
                powers.push(next);
            }
            let mut n = *m;
            n.0[v.index()] = 0;
            out.add_term(n, c * &powers[e]);
        }
        out
    }

    /// Substitutes a polynomial for one variable.
    pub fn substitute(&self, v: Var, p: &MPoly) -> Self {
        let coeffs = self.coeffs_in(v);
        let mut acc = MPoly::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * p) + c;
        }
        acc
    }

    /// Coefficients as a polynomial in `v`; index = power of `v`.
    pub fn coeffs_in(&self, v: Var) -> Vec<MPoly> {
        let mut out = vec![MPoly::zero(); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            let mut n = *m;
            n.0[v.index()] = 0;
            out[e].add_term(n, c.clone());
        }
        out
    }

    pub fn from_coeffs_in(v: Var, coeffs: &[MPoly]) -> Self {
        let mut out = MPoly::zero();
        for (e, c) in coeffs.iter().enumerate() {
            let mv = Monomial::var(v, e as u32);
            for (m, a) in &c.terms {
                out.add_term(m.mul(&mv), a.clone());
            }
        }
        out
    }

    /// Leading coefficient with respect to `v` (a polynomial free of `v`).
    pub fn lc_in(&self, v: Var) -> MPoly {
        let d = self.degree_in(v);
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.exp(v) == d)
                .map(|(m, c)| {
                    let mut n = *m;
                    n.0[v.index()] = 0;
                    (n, c.clone())
                }),
        )
    }

    /// Converts to a univariate polynomial when at most one variable occurs.
    /// Returns the variable (if any) alongside.
    pub fn to_univariate(&self) -> Result<(Option<Var>, UPoly), ExactError> {
        let vars = self.variables();
        match vars.as_slice() {
            [] => Ok((None, UPoly::constant(self.constant_value().unwrap()))),
            [v] => {
                let coeffs = self
                    .coeffs_in(*v)
                    .into_iter()
                    .map(|c| c.constant_value().unwrap())
                    .collect();
                Ok((Some(*v), UPoly::new(coeffs)))
            }
            _ => Err(ExactError::NotUnivariate(
                vars.iter().map(|v| v.name()).collect(),
            )),
        }
    }

    /// Componentwise minimum of the exponents over all terms.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        it.fold(*first, |acc, m| acc.gcd(m))
    }

    pub fn div_monomial(&self, m: &Monomial) -> Self {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (m.div_into(k), c.clone()))
                .collect(),
        }
    }

    /// Exact division; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        let (ld, lcd) = d.leading().expect("division by zero polynomial");
        let (ld, lcd) = (*ld, lcd.clone());
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&(Rat::one() / c)));
        }
        let mut r = self.clone();
        let mut q = MPoly::zero();
        while let Some((lr, lcr)) = r.leading() {
            if !ld.divides(lr) {
                return None;
            }
            let m = ld.div_into(lr);
            let c = lcr / &lcd;
            r = &r - &d.mul_monomial(&m).scale(&c);
            q.add_term(m, c);
        }
        Some(q)
    }

    /// Scales so the leading coefficient is 1.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => MPoly::zero(),
            Some((_, c)) => self.scale(&(Rat::one() / c)),
        }
    }

    /// Scales by a positive rational so all coefficients are coprime integers.
    pub fn integer_normalized(&self) -> (Self, Rat) {
        use num_integer::Integer;
        if self.is_zero() {
            return (MPoly::zero(), Rat::one());
        }
        let den = super::rat::lcm_denominators(self.terms.values());
        let num_gcd = self
            .terms
            .values()
            .fold(num_bigint::BigInt::zero(), |g, c| {
                g.gcd(&(c.numer() * (&den / c.denom())))
            });
        let f = Rat::new(den, num_gcd);
        (self.scale(&f), f)
    }

    /// Sparse term-list form `[[exponents over variables()], "coeff"]`.
    pub fn to_json(&self) -> MPolyJson {
        let vars = self.variables();
        MPolyJson {
            vars: vars.iter().map(|v| v.name().to_string()).collect(),
            terms: self
                .terms
                .iter()
                .rev()
                .map(|(m, c)| (vars.iter().map(|v| m.exp(*v)).collect(), RatStr(c.clone())))
                .collect(),
        }
    }

    pub fn from_json(j: &MPolyJson) -> Result<Self, ExactError> {
        let vars = j
            .vars
            .iter()
            .map(|s| {
                let mut cs = s.chars();
                match (cs.next().and_then(Var::from_name), cs.next()) {
                    (Some(v), None) => Ok(v),
                    _ => Err(ExactError::Parse(format!("unknown variable {s:?}"))),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut p = MPoly::zero();
        for (exps, c) in &j.terms {
            if exps.len() != vars.len() {
                return Err(ExactError::Parse("exponent vector length mismatch".into()));
            }
            let mut m = Monomial::one();
            for (v, e) in vars.iter().zip(exps) {
                m.0[v.index()] += e;
            }
            p.add_term(m, c.0.clone());
        }
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MPolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<(Vec<u32>, RatStr)>,
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: MPoly) -> MPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

fn fmt_monomial(m: &Monomial) -> String {
    let mut s = String::new();
    for v in Var::ALL {
        match m.exp(v) {
            0 => {}
            1 => s.push(v.name()),
            e => {
                s.push(v.name());
                s.push('^');
                s.push_str(&e.to_string());
            }
        }
    }
    s
}

/// Compact notation: `-du^6+b`, `(1/2)x^2-3`, terms in descending order.
impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if neg {
                f.write_str("-")?;
            } else if i > 0 {
                f.write_str("+")?;
            }
            let a = c.abs();
            let mono = fmt_monomial(m);
            if mono.is_empty() {
                f.write_str(&fmt_rat(&a))?;
            } else {
                if !a.is_one() {
                    if a.is_integer() {
                        f.write_str(&fmt_rat(&a))?;
                    } else {
                        write!(f, "({})", fmt_rat(&a))?;
                    }
                }
                f.write_str(&mono)?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// gcd
// ---------------------------------------------------------------------------

/// Greatest common divisor over the rationals, normalized to leading
/// coefficient 1. `gcd(0, 0) = 0`.
pub fn gcd(p: &MPoly, q: &MPoly) -> MPoly {
    if p.is_zero() {
        return q.monic();
    }
    if q.is_zero() {
        return p.monic();
    }
    if p.is_constant() || q.is_constant() {
        return MPoly::one();
    }
    let mp = p.monomial_content();
    let mq = q.monomial_content();
    let m = mp.gcd(&mq);
    let g = gcd_rec(&p.div_monomial(&mp), &q.div_monomial(&mq));
    g.mul_monomial(&m).monic()
}

fn gcd_rec(p: &MPoly, q: &MPoly) -> MPoly {
    if p.is_constant() || q.is_constant() {
        return MPoly::one();
    }
    if p == q {
        return p.monic();
    }
    // Quick divisibility checks catch the common "one divides the other" case.
    if p.num_terms() <= q.num_terms() {
        if q.div_exact(p).is_some() {
            return p.monic();
        }
    } else if p.div_exact(q).is_some() {
        return q.monic();
    }
    let Some(v) = Var::ALL
        .into_iter()
        .filter(|v| p.contains_var(*v) && q.contains_var(*v))
        .min_by_key(|v| p.degree_in(*v).min(q.degree_in(*v)))
    else {
        return MPoly::one();
    };
    let cp = content_in(p, v);
    let cq = content_in(q, v);
    let c = gcd(&cp, &cq);
    let pp = p.div_exact(&cp).expect("content divides");
    let qq = q.div_exact(&cq).expect("content divides");
    let (mut a, mut b) = if pp.degree_in(v) >= qq.degree_in(v) {
        (pp, qq)
    } else {
        (qq, pp)
    };
    let g = loop {
        let r = pseudo_rem(&a, &b, v);
        if r.is_zero() {
            break b;
        }
        if r.degree_in(v) == 0 {
            break MPoly::one();
        }
        a = b;
        b = primitive_part(&r, v);
    };
    (&c * &primitive_part(&g, v)).monic()
}

/// gcd of the coefficients of `p` viewed as a polynomial in `v`.
pub fn content_in(p: &MPoly, v: Var) -> MPoly {
    let mut coeffs: Vec<MPoly> = p
        .coeffs_in(v)
        .into_iter()
        .filter(|c| !c.is_zero())
        .collect();
    coeffs.sort_by_key(MPoly::num_terms);
    let mut g = MPoly::zero();
    for c in &coeffs {
        g = gcd(&g, c);
        if g.is_constant() {
            return MPoly::one();
        }
    }
    g
}

pub fn primitive_part(p: &MPoly, v: Var) -> MPoly {
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides")
}

/// Sparse pseudo-remainder of `a` by `b` with respect to `v`.
pub fn pseudo_rem(a: &MPoly, b: &MPoly, v: Var) -> MPoly {
    let n = b.degree_in(v);
    let lb = b.lc_in(v);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= n {
        let d = r.degree_in(v) - n;
        let lr = r.lc_in(v);
        r = &(&r * &lb) - &(&lr * &b.mul_monomial(&Monomial::var(v, d)));
    }
    r
}
