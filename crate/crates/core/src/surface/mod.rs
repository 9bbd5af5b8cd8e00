//! Quotient surfaces `(t^n + ct + d) y^k = x^n + ax + b`, twist pencils and
//! their fibers.

pub mod census;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cubic::PlaneCubic;
use crate::elliptic::{quadratic_twist, EllipticError, TwistMap, WeierstrassCurve};
use crate::exact::rat::{fmt_rat, int, pow, Rat, RatStr};
use crate::exact::upoly::UPoly;

pub use census::{
    assumption_bounds_check, oval_contains, real_component_census, Bound, ComponentCensus,
    ComponentRange, SeparatedCurve,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("invalid surface: {0}")]
    Invalid(String),
    #[error("operation needs k = 2 and n = 3, got k = {k}, n = {n}")]
    NotKummer { k: u32, n: u32 },
    #[error("degenerate fiber: f({0}) = 0")]
    DegenerateFiber(String),
    #[error("singular fiber: {0}")]
    SingularFiber(String),
    #[error("y0 must be nonzero")]
    ZeroY,
    #[error("invalid pencil: {0}")]
    InvalidPencil(String),
    #[error("curve is singular at a real affine point")]
    SingularCurve,
    #[error("census needs exactly two components, found {0}")]
    NotTwoComponents(usize),
    #[error("census consistency failure: {0}")]
    Internal(String),
}

/// `t^n + c t + d` (or `x^n + a x + b`) as a univariate polynomial.
pub fn trinomial(n: u32, lin: &Rat, cst: &Rat) -> UPoly {
    let mut c = vec![Rat::zero(); n as usize + 1];
    c[0] = cst.clone();
    c[1] += lin;
    c[n as usize] += Rat::one();
    UPoly::new(c)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientSurface {
    pub k: u32,
    pub n: u32,
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub d: Rat,
}

/// Advisory flags attached to a surface.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceFlags {
    /// `a = c = 0` or `b = d = 0`.
    pub excluded_case: bool,
    /// `gcd(k, n) = 1`, which forces geometric irreducibility of the curve.
    pub coprime_kn: bool,
    /// `a^n d^(n-1) - b^(n-1) c^n != 0`.
    pub irreducibility_condition: bool,
}

impl QuotientSurface {
    pub fn build(k: u32, n: u32, a: Rat, b: Rat, c: Rat, d: Rat) -> Result<Self, SurfaceError> {
        if k < 2 || n < 2 {
            return Err(SurfaceError::Invalid(format!(
                "k and n must be at least 2 (k = {k}, n = {n})"
            )));
        }
        if a.is_zero() && b.is_zero() {
            return Err(SurfaceError::Invalid("a and b are both zero".into()));
        }
        if c.is_zero() && d.is_zero() {
            return Err(SurfaceError::Invalid("c and d are both zero".into()));
        }
        Ok(QuotientSurface { k, n, a, b, c, d })
    }

    pub fn from_ints(k: u32, n: u32, a: i64, b: i64, c: i64, d: i64) -> Result<Self, SurfaceError> {
        Self::build(k, n, int(a), int(b), int(c), int(d))
    }

    pub fn flags(&self) -> SurfaceFlags {
        let n = self.n;
        let cond = pow(&self.a, n) * pow(&self.d, n - 1) - pow(&self.b, n - 1) * pow(&self.c, n);
        SurfaceFlags {
            excluded_case: (self.a.is_zero() && self.c.is_zero())
                || (self.b.is_zero() && self.d.is_zero()),
            coprime_kn: self.k.gcd(&self.n) == 1,
            irreducibility_condition: !cond.is_zero(),
        }
    }

    pub fn f(&self) -> UPoly {
        trinomial(self.n, &self.c, &self.d)
    }

    pub fn g(&self) -> UPoly {
        trinomial(self.n, &self.a, &self.b)
    }

    pub fn contains(&self, x: &Rat, y: &Rat, t: &Rat) -> bool {
        self.f().eval(t) * pow(y, self.k) == self.g().eval(x)
    }

    fn require_kummer(&self) -> Result<(), SurfaceError> {
        if self.k == 2 && self.n == 3 {
            Ok(())
        } else {
            Err(SurfaceError::NotKummer {
                k: self.k,
                n: self.n,
            })
        }
    }

    /// The curve `y^2 = x^3 + ax + b`.
    pub fn e1(&self) -> Result<WeierstrassCurve, SurfaceError> {
        self.require_kummer()?;
        WeierstrassCurve::new(self.a.clone(), self.b.clone())
            .map_err(|e| SurfaceError::SingularFiber(e.to_string()))
    }

    /// Fiber `f(t0) y^2 = g(x)` as its twist `Y^2 = X^3 + f(t0)^2 a X + f(t0)^3 b`.
    pub fn fiber_t(&self, t0: &Rat) -> Result<(WeierstrassCurve, TwistMap), SurfaceError> {
        self.require_kummer()?;
        twist_fiber(&self.e1()?, &self.f(), t0)
    }

    /// Fiber `g(x) = y0^2 f(t)` as a plane cubic in `(x : t : z)`.
    pub fn fiber_y(&self, y0: &Rat) -> Result<PlaneCubic, SurfaceError> {
        self.require_kummer()?;
        if y0.is_zero() {
            return Err(SurfaceError::ZeroY);
        }
        let w = y0 * y0;
        let mut co: [Rat; 10] = Default::default();
        co[0] = int(1); // X^3
        co[5] = self.a.clone(); // X Z^2
        co[9] = &self.b - &w * &self.d; // Z^3
        co[6] = -&w; // Y^3
        co[8] = -&w * &self.c; // Y Z^2
        PlaneCubic::new(co).map_err(|e| SurfaceError::Invalid(e.to_string()))
    }

    /// The fiber `g(x) = y0^2 f(t)` in separated form.
    pub fn fiber_y_separated(&self, y0: &Rat) -> Result<SeparatedCurve, SurfaceError> {
        if y0.is_zero() {
            return Err(SurfaceError::ZeroY);
        }
        Ok(SeparatedCurve {
            g: self.g(),
            w: y0 * y0,
            h: self.f(),
        })
    }

    /// The fiber `f(t0) y^2 = g(x)` in separated form.
    pub fn fiber_t_separated(&self, t0: &Rat) -> Result<SeparatedCurve, SurfaceError> {
        let q = self.f().eval(t0);
        if q.is_zero() {
            return Err(SurfaceError::DegenerateFiber(fmt_rat(t0)));
        }
        Ok(SeparatedCurve {
            g: self.g(),
            w: q,
            h: UPoly::monomial(int(1), 2),
        })
    }

    pub fn to_json(&self) -> SurfaceJson {
        SurfaceJson {
            k: self.k,
            n: self.n,
            a: RatStr(self.a.clone()),
            b: RatStr(self.b.clone()),
            c: RatStr(self.c.clone()),
            d: RatStr(self.d.clone()),
        }
    }

    pub fn from_json(j: &SurfaceJson) -> Result<Self, SurfaceError> {
        Self::build(
            j.k,
            j.n,
            j.a.0.clone(),
            j.b.0.clone(),
            j.c.0.clone(),
            j.d.0.clone(),
        )
    }
}

fn twist_fiber(
    e: &WeierstrassCurve,
    f: &UPoly,
    t0: &Rat,
) -> Result<(WeierstrassCurve, TwistMap), SurfaceError> {
    let q = f.eval(t0);
    if q.is_zero() {
        return Err(SurfaceError::DegenerateFiber(fmt_rat(t0)));
    }
    quadratic_twist(e, &q).map_err(|e: EllipticError| SurfaceError::SingularFiber(e.to_string()))
}

pub fn surface_contains(s: &QuotientSurface, x: &Rat, y: &Rat, t: &Rat) -> bool {
    s.contains(x, y, t)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceJson {
    pub k: u32,
    pub n: u32,
    pub a: RatStr,
    pub b: RatStr,
    pub c: RatStr,
    pub d: RatStr,
}

/// `E^{f(t)}` with `f(t) = t^deg + ct + d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistPencil {
    pub curve: WeierstrassCurve,
    pub deg: u32,
    pub c: Rat,
    pub d: Rat,
}

impl TwistPencil {
    pub fn new(curve: WeierstrassCurve, deg: u32, c: Rat, d: Rat) -> Result<Self, SurfaceError> {
        let bad = |m: &str| Err(SurfaceError::InvalidPencil(m.into()));
        match deg {
            4 => {
                if !curve.b().is_zero() || curve.a().is_zero() {
                    return bad("degree-4 pencils need y^2 = x^3 + Ax with A != 0");
                }
                if c.is_zero() || d.is_zero() {
                    return bad("degree-4 pencils need c, d != 0");
                }
            }
            6 => {
                if !curve.a().is_zero() || curve.b().is_zero() {
                    return bad("degree-6 pencils need y^2 = x^3 + B with B != 0");
                }
                if c.is_zero() {
                    return bad("degree-6 pencils need c != 0");
                }
            }
            _ => return bad("pencil degree must be 4 or 6"),
        }
        Ok(TwistPencil { curve, deg, c, d })
    }

    pub fn f(&self) -> UPoly {
        trinomial(self.deg, &self.c, &self.d)
    }

    pub fn fiber_t(&self, t0: &Rat) -> Result<(WeierstrassCurve, TwistMap), SurfaceError> {
        twist_fiber(&self.curve, &self.f(), t0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::rat;

    fn k1123() -> QuotientSurface {
        QuotientSurface::from_ints(2, 3, 1, 1, 2, 3).unwrap()
    }

    #[test]
    fn build_and_flags() {
        let s = k1123();
        assert_eq!(s.g(), UPoly::from_ints(&[1, 1, 0, 1]));
        assert_eq!(s.f(), UPoly::from_ints(&[3, 2, 0, 1]));
        assert!(QuotientSurface::from_ints(2, 3, 0, 0, 2, 3).is_err());
        assert!(QuotientSurface::from_ints(2, 3, 1, 1, 0, 0).is_err());
        assert!(QuotientSurface::from_ints(1, 3, 1, 1, 2, 3).is_err());
        let x = QuotientSurface::from_ints(3, 4, 1, 1, 2, 3).unwrap();
        assert!(x.flags().coprime_kn);
        assert!(!s.flags().excluded_case);
        assert!(
            QuotientSurface::from_ints(2, 3, 0, 1, 0, 3)
                .unwrap()
                .flags()
                .excluded_case
        );
    }

    #[test]
    fn containment() {
        assert!(k1123().contains(&int(-2), &int(1), &int(-2)));
        let x = QuotientSurface::from_ints(3, 4, 1, 1, 2, 3).unwrap();
        assert!(x.contains(&int(-2), &int(1), &int(-2)));
        // y = 0: on the surface iff g(x) = 0
        let s = QuotientSurface::from_ints(2, 3, -4, 0, 1, 1).unwrap();
        assert!(s.contains(&int(2), &int(0), &int(5)));
        assert!(!s.contains(&int(1), &int(0), &int(5)));
    }

    #[test]
    fn t_fibers() {
        let (e, map) = k1123().fiber_t(&int(-2)).unwrap();
        assert_eq!(e, WeierstrassCurve::from_ints(81, -729).unwrap());
        assert!(e.contains(&map.forward(&int(-2), &int(1))));
        // f = t^4 + 1 falls outside the parametrized family but is a valid pencil
        let pencil = TwistPencil {
            curve: WeierstrassCurve::from_ints(-4, 0).unwrap(),
            deg: 4,
            c: int(0),
            d: int(1),
        };
        assert_eq!(pencil.fiber_t(&int(0)).unwrap().0, pencil.curve);
        let s = QuotientSurface::from_ints(2, 3, 1, 1, 1, -2).unwrap(); // f(1) = 0
        assert!(matches!(
            s.fiber_t(&int(1)),
            Err(SurfaceError::DegenerateFiber(_))
        ));
    }

    #[test]
    fn y_fibers() {
        let c = k1123().fiber_y(&int(1)).unwrap();
        let expect = crate::exact::parse::parse_ratfunc("X^3+XZ^2+Z^3-(Y^3+2YZ^2+3Z^3)").unwrap();
        assert_eq!(c.to_mpoly(), *expect.num());
        assert!(c.contains(&crate::cubic::ProjPoint::affine(int(-2), int(-2))));
        assert!(c.is_smooth());
        assert!(matches!(k1123().fiber_y(&int(0)), Err(SurfaceError::ZeroY)));
        let c2 = k1123().fiber_y(&rat(1, 2)).unwrap();
        assert!(c2.coeffs()[6] == rat(-1, 4));
    }

    #[test]
    fn pencil_invariants() {
        let e1728 = WeierstrassCurve::from_ints(1, 0).unwrap();
        assert!(TwistPencil::new(e1728.clone(), 4, int(1), int(1)).is_ok());
        assert!(TwistPencil::new(e1728.clone(), 4, int(0), int(1)).is_err());
        assert!(TwistPencil::new(e1728, 6, int(1), int(1)).is_err());
        let e0 = WeierstrassCurve::from_ints(0, 1).unwrap();
        assert!(TwistPencil::new(e0.clone(), 6, int(1), int(0)).is_ok());
        assert!(TwistPencil::new(e0, 6, int(0), int(1)).is_err());
    }
}
