//! Symbolic parametrizations `u -> (x(u), y(u), t(u))` and their identities.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::mpoly::{MPoly, Var};
use crate::exact::parse::parse_ratfunc;
use crate::exact::rat::{pow, Rat, RatStr};
use crate::exact::ratfunc::{residual, RatFunc, RatFuncJson};
use crate::exact::ExactError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("invalid family: {0}")]
    Invalid(String),
    #[error("inadmissible coefficients: {0}")]
    Coefficients(String),
    #[error("u = 0 is not in the domain")]
    ZeroU,
    #[error("pole of the parametrization: {0} vanishes")]
    Pole(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Variant {
    General { k: u32, n: u32 },
    Quartic1728,
    Sextic0,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::General { k, n } => write!(f, "general(k={k}, n={n})"),
            Variant::Quartic1728 => f.write_str("quartic1728"),
            Variant::Sextic0 => f.write_str("sextic0"),
        }
    }
}

/// Values for the symbols `a, b, c, d`; unused symbols are ignored.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Coeffs {
    pub a: RatStr,
    pub b: RatStr,
    pub c: RatStr,
    pub d: RatStr,
}

impl Coeffs {
    pub fn new(a: Rat, b: Rat, c: Rat, d: Rat) -> Self {
        Coeffs {
            a: RatStr(a),
            b: RatStr(b),
            c: RatStr(c),
            d: RatStr(d),
        }
    }

    pub fn get(&self, v: Var) -> Option<Rat> {
        match v {
            Var::A => Some(self.a.0.clone()),
            Var::B => Some(self.b.0.clone()),
            Var::C => Some(self.c.0.clone()),
            Var::D => Some(self.d.0.clone()),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamFamily {
    pub variant: Variant,
    pub x: RatFunc,
    pub y: RatFunc,
    pub t: RatFunc,
}

/// Exact residuals of the curve and surface identities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub curve_residual: MPoly,
    pub surface_residual: MPoly,
}

impl IdentityReport {
    pub fn verified(&self) -> bool {
        self.curve_residual.is_zero() && self.surface_residual.is_zero()
    }
}

fn rf(s: &str) -> RatFunc {
    parse_ratfunc(s).expect("built-in parametrization parses")
}

impl ParamFamily {
    pub fn build(variant: Variant) -> Result<Self, FamilyError> {
        let (x, y, t) = match variant {
            Variant::General { k, n } => {
                if k < 2 || n < 2 {
                    return Err(FamilyError::Invalid(format!(
                        "k and n must be at least 2 (k = {k}, n = {n})"
                    )));
                }
                let x = rf(&format!("(du^{}-b)/(a-cu^{})", k * n, k * n - k));
                let y = rf(&format!("u^{n}"));
                let t = &x / &rf(&format!("u^{k}"));
                (x, y, t)
            }
            Variant::Quartic1728 => (
                rf("((d^2/c^4)u^8-2dau^4+c^4a^2)/u^6"),
                rf("((-d/c^4)u^4+a)/u"),
                rf("((-d/c)u^4+c^3a)/u^4"),
            ),
            Variant::Sextic0 => (
                rf("((d^2/(b^2c^2))u^12-(2db^5/c^2)u^6+b^12/c^2)/u^10"),
                rf("u^3/b^3"),
                rf("(b^7/c-(d/c)u^6)/u^6"),
            ),
        };
        Ok(ParamFamily { variant, x, y, t })
    }

    /// Exponents `(k, n_x, n_t)`: the surface is `(t^{n_t} + ct + d) y^k = x^{n_x} + ax + b`.
    pub fn shape(&self) -> (u32, u32, u32) {
        match self.variant {
            Variant::General { k, n } => (k, n, n),
            Variant::Quartic1728 => (2, 3, 4),
            Variant::Sextic0 => (2, 3, 6),
        }
    }

    fn sym(s: &str) -> RatFunc {
        rf(s)
    }

    /// Left and right sides of the curve equation, as functions of `x, y, t`.
    fn curve_sides(&self, x: &RatFunc, y: &RatFunc, t: &RatFunc) -> (RatFunc, RatFunc) {
        let (k, _, _) = self.shape();
        let lhs = &(&(&Self::sym("c") * t) + &Self::sym("d")) * &y.pow(k);
        let rhs = match self.variant {
            Variant::General { .. } => &(&Self::sym("a") * x) + &Self::sym("b"),
            Variant::Quartic1728 => &Self::sym("a") * x,
            Variant::Sextic0 => Self::sym("b"),
        };
        (lhs, rhs)
    }

    fn surface_sides(&self, x: &RatFunc, y: &RatFunc, t: &RatFunc) -> (RatFunc, RatFunc) {
        let (k, nx, nt) = self.shape();
        let f = &(&t.pow(nt) + &(&Self::sym("c") * t)) + &Self::sym("d");
        let lhs = &f * &y.pow(k);
        let rhs = match self.variant {
            Variant::General { .. } => &(&x.pow(nx) + &(&Self::sym("a") * x)) + &Self::sym("b"),
            Variant::Quartic1728 => &x.pow(nx) + &(&Self::sym("a") * x),
            Variant::Sextic0 => &x.pow(nx) + &Self::sym("b"),
        };
        (lhs, rhs)
    }

    pub fn identity_report(&self) -> IdentityReport {
        let (cl, cr) = self.curve_sides(&self.x, &self.y, &self.t);
        let (sl, sr) = self.surface_sides(&self.x, &self.y, &self.t);
        IdentityReport {
            curve_residual: residual(&cl, &cr),
            surface_residual: residual(&sl, &sr),
        }
    }

    /// For the general family: with `r = x/t`, checks `y^k = r^n` and
    /// `t r (c r^{n-1} - a) = b - d r^n`.
    pub fn auxiliary_relation_holds(&self) -> Option<bool> {
        let Variant::General { k, n } = self.variant else {
            return None;
        };
        let r = &self.x / &self.t;
        let lin = &(&Self::sym("c") * &r.pow(n - 1)) - &Self::sym("a");
        let lhs = &(&self.t * &r) * &lin;
        let rhs = &Self::sym("b") - &(&Self::sym("d") * &r.pow(n));
        Some(residual(&lhs, &rhs).is_zero() && residual(&self.y.pow(k), &r.pow(n)).is_zero())
    }

    pub fn check_coeffs(&self, c: &Coeffs) -> Result<(), FamilyError> {
        let z = |q: &RatStr| q.0.is_zero();
        let bad = |m: &str| Err(FamilyError::Coefficients(m.into()));
        match self.variant {
            Variant::General { .. } => {
                if z(&c.a) && z(&c.b) {
                    return bad("a and b are both zero");
                }
                if z(&c.c) && z(&c.d) {
                    return bad("c and d are both zero");
                }
            }
            Variant::Quartic1728 => {
                if z(&c.a) || z(&c.c) || z(&c.d) {
                    return bad("quartic family needs a, c, d nonzero");
                }
            }
            Variant::Sextic0 => {
                if z(&c.b) || z(&c.c) {
                    return bad("sextic family needs b, c nonzero");
                }
            }
        }
        Ok(())
    }

    /// Rational point `(x(u), y(u), t(u))` for the given coefficients.
    pub fn eval(&self, c: &Coeffs, u: &Rat) -> Result<(Rat, Rat, Rat), FamilyError> {
        self.check_coeffs(c)?;
        if u.is_zero() {
            return Err(FamilyError::ZeroU);
        }
        let assign = |v: Var| {
            if v == Var::U {
                Some(u.clone())
            } else {
                c.get(v)
            }
        };
        let ev = |f: &RatFunc| {
            f.eval(&assign).map_err(|e| match e {
                ExactError::Pole(p) => FamilyError::Pole(p),
                other => FamilyError::Exact(other),
            })
        };
        Ok((ev(&self.x)?, ev(&self.y)?, ev(&self.t)?))
    }

    /// `f(t) = t^{n_t} + ct + d`.
    pub fn f_value(&self, c: &Coeffs, t: &Rat) -> Rat {
        let (_, _, nt) = self.shape();
        pow(t, nt) + &c.c.0 * t + &c.d.0
    }

    /// `g(x)` on the right of the surface equation.
    pub fn g_value(&self, c: &Coeffs, x: &Rat) -> Rat {
        let (_, nx, _) = self.shape();
        match self.variant {
            Variant::General { .. } => pow(x, nx) + &c.a.0 * x + &c.b.0,
            Variant::Quartic1728 => pow(x, nx) + &c.a.0 * x,
            Variant::Sextic0 => pow(x, nx) + &c.b.0,
        }
    }

    pub fn surface_holds(&self, c: &Coeffs, x: &Rat, y: &Rat, t: &Rat) -> bool {
        let (k, _, _) = self.shape();
        self.f_value(c, t) * pow(y, k) == self.g_value(c, x)
    }

    pub fn curve_holds(&self, c: &Coeffs, x: &Rat, y: &Rat, t: &Rat) -> bool {
        let (k, _, _) = self.shape();
        let lhs = (&c.c.0 * t + &c.d.0) * pow(y, k);
        let rhs = match self.variant {
            Variant::General { .. } => &c.a.0 * x + &c.b.0,
            Variant::Quartic1728 => &c.a.0 * x,
            Variant::Sextic0 => c.b.0.clone(),
        };
        lhs == rhs
    }

    pub fn to_json(&self) -> FamilyJson {
        FamilyJson {
            variant: self.variant,
            x: self.x.to_json(),
            y: self.y.to_json(),
            t: self.t.to_json(),
        }
    }

    pub fn from_json(j: &FamilyJson) -> Result<Self, FamilyError> {
        Ok(ParamFamily {
            variant: j.variant,
            x: RatFunc::from_json(&j.x)?,
            y: RatFunc::from_json(&j.y)?,
            t: RatFunc::from_json(&j.t)?,
        })
    }
}

pub fn build_family(variant: Variant) -> Result<ParamFamily, FamilyError> {
    ParamFamily::build(variant)
}

pub fn verify_family_identities(f: &ParamFamily) -> bool {
    f.identity_report().verified()
}

pub fn eval_family(f: &ParamFamily, c: &Coeffs, u: &Rat) -> Result<(Rat, Rat, Rat), FamilyError> {
    f.eval(c, u)
}

impl fmt::Display for ParamFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x = {}, y = {}, t = {}", self.x, self.y, self.t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyJson {
    pub variant: Variant,
    pub x: RatFuncJson,
    pub y: RatFuncJson,
    pub t: RatFuncJson,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::{int, rat};

    fn co(a: i64, b: i64, c: i64, d: i64) -> Coeffs {
        Coeffs::new(int(a), int(b), int(c), int(d))
    }

    #[test]
    fn general_matches_display() {
        let f = build_family(Variant::General { k: 2, n: 3 }).unwrap();
        assert_eq!(f.x, parse_ratfunc("(du^6-b)/(a-cu^4)").unwrap());
        assert_eq!(f.y, parse_ratfunc("u^3").unwrap());
        assert_eq!(f.t, parse_ratfunc("(du^6-b)/(u^2(a-cu^4))").unwrap());
        assert_eq!(f.x.to_string(), "(-du^6+b)/(cu^4-a)");
        assert!(verify_family_identities(&f));
        assert_eq!(f.auxiliary_relation_holds(), Some(true));
    }

    #[test]
    fn other_families_verify() {
        for v in [
            Variant::General { k: 3, n: 4 },
            Variant::Quartic1728,
            Variant::Sextic0,
        ] {
            let f = build_family(v).unwrap();
            assert!(verify_family_identities(&f), "{v}");
        }
        let q = build_family(Variant::Quartic1728).unwrap();
        assert_eq!(q.t, parse_ratfunc("((-d/c)u^4+c^3a)/u^4").unwrap());
        let s = build_family(Variant::Sextic0).unwrap();
        assert_eq!(s.y, parse_ratfunc("u^3/b^3").unwrap());
    }

    #[test]
    fn corrupted_family_fails() {
        let mut f = build_family(Variant::General { k: 2, n: 3 }).unwrap();
        f.x = parse_ratfunc("(du^6+b)/(a-cu^4)").unwrap();
        assert!(!verify_family_identities(&f));
        let mut q = build_family(Variant::Quartic1728).unwrap();
        q.y = -&q.y;
        // y enters squared: the sign flip survives, a changed exponent does not
        assert!(verify_family_identities(&q));
        q.t = &q.t + &RatFunc::one();
        assert!(!verify_family_identities(&q));
    }

    #[test]
    fn evaluation_examples() {
        let g = build_family(Variant::General { k: 2, n: 3 }).unwrap();
        assert_eq!(
            g.eval(&co(1, 1, 2, 3), &int(1)).unwrap(),
            (int(-2), int(1), int(-2))
        );
        let q = build_family(Variant::Quartic1728).unwrap();
        let c = co(2, 0, 1, 1);
        let (x, y, t) = q.eval(&c, &int(1)).unwrap();
        assert_eq!((x.clone(), y.clone(), t.clone()), (int(1), int(1), int(1)));
        assert!(q.surface_holds(&c, &x, &y, &t));
        let s = build_family(Variant::Sextic0).unwrap();
        let c = co(0, 1, 1, 2);
        let (x, y, t) = s.eval(&c, &int(1)).unwrap();
        assert_eq!((x.clone(), y.clone(), t.clone()), (int(1), int(1), int(-1)));
        assert!(s.surface_holds(&c, &x, &y, &t) && s.curve_holds(&c, &x, &y, &t));
    }

    #[test]
    fn poles_and_domain() {
        let g = build_family(Variant::General { k: 2, n: 3 }).unwrap();
        // a - c u^4 = 0 at u = 1 when a = c
        assert!(matches!(
            g.eval(&co(1, 1, 1, 3), &int(1)),
            Err(FamilyError::Pole(_))
        ));
        assert!(matches!(
            g.eval(&co(1, 1, 2, 3), &int(0)),
            Err(FamilyError::ZeroU)
        ));
        let q = build_family(Variant::Quartic1728).unwrap();
        assert!(q.eval(&co(0, 0, 1, 1), &int(1)).is_err());
        assert!(build_family(Variant::General { k: 1, n: 3 }).is_err());
    }

    #[test]
    fn quartic_y_vanishes_on_the_crossing() {
        // u^4 = a c^4 / d: a = 16, c = 1, d = 1 gives u = 2
        let q = build_family(Variant::Quartic1728).unwrap();
        let (_, y, _) = q.eval(&co(16, 0, 1, 1), &int(2)).unwrap();
        assert!(y.is_zero());
        let (_, y, _) = q.eval(&co(16, 0, 1, 1), &rat(3, 2)).unwrap();
        assert!(!y.is_zero());
    }
}
