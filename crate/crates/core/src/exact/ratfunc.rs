//! Reduced quotients of multivariate polynomials.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::mpoly::{gcd, MPoly, MPolyJson, Var};
use super::rat::{lcm_denominators, Rat};
use super::ExactError;

/// `num / den` with `gcd(num, den) = 1`, coprime integer coefficients and a
/// positive leading coefficient in `den`. Equal functions have identical
/// representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: MPoly,
    den: MPoly,
}

impl RatFunc {
    pub fn new(num: MPoly, den: MPoly) -> Result<Self, ExactError> {
        if den.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        Ok(Self::normalize_scalars(num, den))
    }

    /// Builds without a gcd computation; caller guarantees coprimality.
    fn from_coprime(num: MPoly, den: MPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        Self::normalize_scalars(num, den)
    }

    fn normalize_scalars(num: MPoly, den: MPoly) -> Self {
        let l = lcm_denominators(num.terms().chain(den.terms()).map(|(_, c)| c));
        let g = num
            .terms()
            .chain(den.terms())
            .fold(BigInt::zero(), |g, (_, c)| {
                g.gcd(&(c.numer() * (&l / c.denom())))
            });
        let mut f = Rat::new(l, g);
        if den.lc().is_negative() {
            f = -f;
        }
        RatFunc {
            num: num.scale(&f),
            den: den.scale(&f),
        }
    }

    pub fn zero() -> Self {
        RatFunc {
            num: MPoly::zero(),
            den: MPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(MPoly::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_poly(MPoly::constant(c))
    }

    pub fn var(v: Var) -> Self {
        Self::from_poly(MPoly::var(v))
    }

    pub fn from_poly(p: MPoly) -> Self {
        Self::from_coprime(p, MPoly::one())
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn inv(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        Ok(Self::from_coprime(self.den.clone(), self.num.clone()))
    }

    /// Integer power; `num^e / den^e` stays reduced.
    pub fn pow(&self, e: u32) -> Self {
        Self::from_coprime(self.num.pow(e), self.den.pow(e))
    }

    pub fn checked_div(&self, o: &RatFunc) -> Result<Self, ExactError> {
        Ok(self * &o.inv()?)
    }

    /// Evaluates; errors when the denominator vanishes at the point.
    pub fn eval(&self, assign: &dyn Fn(Var) -> Option<Rat>) -> Result<Rat, ExactError> {
        let d = self.den.eval(assign)?;
        if d.is_zero() {
            return Err(ExactError::Pole(self.den.to_string()));
        }
        Ok(self.num.eval(assign)? / d)
    }

    /// Substitutes a rational for one variable (denominator may not vanish identically).
    pub fn specialize(&self, v: Var, q: &Rat) -> Result<Self, ExactError> {
        let den = self.den.specialize(v, q);
        if den.is_zero() {
            return Err(ExactError::Pole(self.den.to_string()));
        }
        RatFunc::new(self.num.specialize(v, q), den)
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut vs = self.num.variables();
        for v in self.den.variables() {
            if !vs.contains(&v) {
                vs.push(v);
            }
        }
        vs.sort();
        vs
    }

    pub fn to_json(&self) -> RatFuncJson {
        RatFuncJson {
            num: self.num.to_json(),
            den: self.den.to_json(),
        }
    }

    pub fn from_json(j: &RatFuncJson) -> Result<Self, ExactError> {
        RatFunc::new(MPoly::from_json(&j.num)?, MPoly::from_json(&j.den)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatFuncJson {
    pub num: MPolyJson,
    pub den: MPolyJson,
}

/// True iff `num(f)·den(g) − num(g)·den(f)` is the zero polynomial.
pub fn ratfunc_equal(f: &RatFunc, g: &RatFunc) -> bool {
    residual(f, g).is_zero()
}

/// The cross-multiplied difference `num(f)·den(g) − num(g)·den(f)`.
pub fn residual(f: &RatFunc, g: &RatFunc) -> MPoly {
    &(&f.num * &g.den) - &(&g.num * &f.den)
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        // Henrici: only the gcd of the denominators and a final small gcd.
        let g = gcd(&self.den, &o.den);
        if g.is_constant() {
            let num = &(&self.num * &o.den) + &(&o.num * &self.den);
            return RatFunc::from_coprime(num, &self.den * &o.den);
        }
        let d1 = self.den.div_exact(&g).expect("gcd divides");
        let d2 = o.den.div_exact(&g).expect("gcd divides");
        let num = &(&self.num * &d2) + &(&o.num * &d1);
        if num.is_zero() {
            return RatFunc::zero();
        }
        let h = gcd(&num, &g);
        let (num, g) = if h.is_constant() {
            (num, g)
        } else {
            (num.div_exact(&h).unwrap(), g.div_exact(&h).unwrap())
        };
        RatFunc::from_coprime(num, &(&d1 * &d2) * &g)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self + &(-o)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        let g1 = gcd(&self.num, &o.den);
        let g2 = gcd(&o.num, &self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = o.den.div_exact(&g1).unwrap();
        let n2 = o.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        RatFunc::from_coprime(&n1 * &n2, &d1 * &d2)
    }
}

/// Panics on division by the zero function; see [`RatFunc::checked_div`].
impl Div for &RatFunc {
    type Output = RatFunc;
    fn div(self, o: &RatFunc) -> RatFunc {
        self.checked_div(o)
            .expect("division by zero rational function")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.constant_value().is_some_and(|c| c.is_one()) {
            return write!(f, "{}", self.num);
        }
        let num = if self.num.num_terms() > 1 {
            format!("({})", self.num)
        } else {
            self.num.to_string()
        };
        // A bare power like `u^6` needs no parentheses; anything else does.
        let bare = self.den.leading().is_some_and(|(m, c)| {
            self.den.num_terms() == 1 && c.is_one() && m.0.iter().filter(|e| **e > 0).count() <= 1
        });
        if bare {
            write!(f, "{num}/{}", self.den)
        } else {
            write!(f, "{num}/({})", self.den)
        }
    }
}
