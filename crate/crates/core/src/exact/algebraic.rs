//! Real algebraic numbers given by a squarefree polynomial and an
//! isolating box, with exact comparison and sign evaluation.

use std::cmp::Ordering;

use num_traits::Zero;

use super::rat::{int, Rat};
use super::sturm::{refine_box, RootBox, SturmChain};
use super::upoly::UPoly;

#[derive(Clone, Debug)]
pub struct AlgebraicReal {
    poly: UPoly,
    lo: Rat,
    hi: Rat,
    exact: Option<Rat>,
}

impl AlgebraicReal {
    /// `b` must isolate a root of `p` with non-root endpoints.
    pub fn from_box(p: &UPoly, b: &RootBox) -> Self {
        let poly = p.squarefree_part();
        let exact = rational_root_in(&poly, &b.low, &b.high);
        AlgebraicReal {
            poly,
            lo: b.low.clone(),
            hi: b.high.clone(),
            exact,
        }
    }

    pub fn from_rat(q: Rat) -> Self {
        AlgebraicReal {
            poly: UPoly::new(vec![-q.clone(), int(1)]),
            lo: &q - int(1),
            hi: &q + int(1),
            exact: Some(q),
        }
    }

    pub fn poly(&self) -> &UPoly {
        &self.poly
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        self.exact.as_ref()
    }

    pub fn bounds(&self) -> (&Rat, &Rat) {
        (&self.lo, &self.hi)
    }

    pub fn root_box(&self) -> RootBox {
        RootBox {
            low: self.lo.clone(),
            high: self.hi.clone(),
            simple: true,
        }
    }

    /// Halves the isolating box.
    pub fn refine(&mut self) {
        if let Some(q) = &self.exact {
            let w = (&self.hi - &self.lo) / int(4);
            self.lo = q - &w;
            self.hi = q + &w;
            return;
        }
        let w = (&self.hi - &self.lo) / int(2);
        let b = refine_box(&self.poly, &self.root_box(), &w);
        self.lo = b.low;
        self.hi = b.high;
    }

    /// Refines until the box is narrower than `w`.
    pub fn refine_to(&mut self, w: &Rat) {
        while &(&self.hi - &self.lo) >= w {
            self.refine();
        }
    }

    pub fn cmp_rat(&mut self, q: &Rat) -> Ordering {
        if let Some(e) = &self.exact {
            return e.cmp(q);
        }
        if self.contains_root(q) {
            self.exact = Some(q.clone());
            return Ordering::Equal;
        }
        loop {
            if q <= &self.lo {
                return Ordering::Greater;
            }
            if q >= &self.hi {
                return Ordering::Less;
            }
            self.refine();
        }
    }

    /// Exact comparison of two algebraic reals.
    pub fn cmp_mut(&mut self, other: &mut AlgebraicReal) -> Ordering {
        if let (Some(a), Some(b)) = (&self.exact, &other.exact) {
            return a.cmp(b);
        }
        if let Some(a) = self.exact.clone() {
            return other.cmp_rat(&a).reverse();
        }
        if let Some(b) = other.exact.clone() {
            return self.cmp_rat(&b);
        }
        let g = self.poly.gcd(&other.poly);
        let may_be_equal = g.degree().unwrap_or(0) > 0;
        let gchain = may_be_equal.then(|| SturmChain::new(&g));
        loop {
            if self.hi <= other.lo {
                return Ordering::Less;
            }
            if other.hi <= self.lo {
                return Ordering::Greater;
            }
            if let Some(c) = &gchain {
                let lo = (&self.lo).max(&other.lo).clone();
                let hi = (&self.hi).min(&other.hi).clone();
                // A common root inside both boxes is the root of each.
                if lo < hi && g.sign_at(&lo) != 0 && c.count_in(&lo, &hi) > 0 {
                    return Ordering::Equal;
                }
                if lo < hi
                    && g.sign_at(&lo) == 0
                    && self.contains_root(&lo)
                    && other.contains_root(&lo)
                {
                    return Ordering::Equal;
                }
            }
            if (&self.hi - &self.lo) >= (&other.hi - &other.lo) {
                self.refine();
            } else {
                other.refine();
            }
        }
    }

    fn contains_root(&self, q: &Rat) -> bool {
        &self.lo < q && q <= &self.hi && self.poly.eval(q).is_zero()
    }

    /// Exact sign of `q(self)`.
    pub fn sign_of(&mut self, q: &UPoly) -> i8 {
        if let Some(e) = &self.exact {
            return q.sign_at(e);
        }
        if q.is_zero() {
            return 0;
        }
        let g = self.poly.gcd(q);
        if g.degree().unwrap_or(0) > 0 && SturmChain::new(&g).count_in(&self.lo, &self.hi) > 0 {
            return 0;
        }
        let qs = q.squarefree_part();
        let chain = SturmChain::new(&qs);
        loop {
            if qs.sign_at(&self.lo) != 0 && chain.count_in(&self.lo, &self.hi) == 0 {
                return q.sign_at(&self.hi);
            }
            self.refine();
        }
    }
}

fn rational_root_in(p: &UPoly, lo: &Rat, hi: &Rat) -> Option<Rat> {
    if p.degree() == Some(1) {
        let r = -p.coeff(0) / p.coeff(1);
        return (lo < &r && &r <= hi).then_some(r);
    }
    None
}

/// Interval enclosure of `p` over `[lo, hi]` by interval Horner evaluation.
pub fn eval_interval(p: &UPoly, lo: &Rat, hi: &Rat) -> (Rat, Rat) {
    let mut acc = (Rat::zero(), Rat::zero());
    for c in p.coeffs().iter().rev() {
        let prods = [&acc.0 * lo, &acc.0 * hi, &acc.1 * lo, &acc.1 * hi];
        let mn = prods.iter().min().unwrap().clone();
        let mx = prods.iter().max().unwrap().clone();
        acc = (mn + c, mx + c);
    }
    acc
}

/// Extended real: a real algebraic number or one of the infinities.
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum ExtReal {
    NegInf,
    Fin(AlgebraicReal),
    PosInf,
}

impl ExtReal {
    pub fn cmp_mut(&mut self, other: &mut ExtReal) -> Ordering {
        match (self, other) {
            (ExtReal::NegInf, ExtReal::NegInf) | (ExtReal::PosInf, ExtReal::PosInf) => {
                Ordering::Equal
            }
            (ExtReal::NegInf, _) | (_, ExtReal::PosInf) => Ordering::Less,
            (_, ExtReal::NegInf) | (ExtReal::PosInf, _) => Ordering::Greater,
            (ExtReal::Fin(a), ExtReal::Fin(b)) => a.cmp_mut(b),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::rat;
    use crate::exact::sturm::isolate_real_roots;

    fn sqrt(n: i64) -> AlgebraicReal {
        let p = UPoly::from_ints(&[-n, 0, 1]);
        let b = isolate_real_roots(&p).unwrap().pop().unwrap();
        AlgebraicReal::from_box(&p, &b)
    }

    #[test]
    fn compare_square_roots() {
        let mut a = sqrt(2);
        let mut b = sqrt(3);
        assert_eq!(a.cmp_mut(&mut b), Ordering::Less);
        assert_eq!(a.cmp_rat(&rat(7, 5)), Ordering::Greater);
        // sqrt(8)/2 == sqrt(2), given as a root of 4x^2 - 8
        let p = UPoly::from_ints(&[-8, 0, 4]);
        let bx = isolate_real_roots(&p).unwrap().pop().unwrap();
        let mut c = AlgebraicReal::from_box(&p, &bx);
        assert_eq!(a.cmp_mut(&mut c), Ordering::Equal);
    }

    #[test]
    fn sign_of_polynomial_at_algebraic_point() {
        let mut a = sqrt(2);
        assert_eq!(a.sign_of(&UPoly::from_ints(&[-2, 0, 1])), 0);
        assert_eq!(a.sign_of(&UPoly::from_ints(&[-1, 1])), 1);
        assert_eq!(a.sign_of(&UPoly::from_ints(&[-3, 2])), -1); // 2*sqrt2 - 3 < 0
    }

    #[test]
    fn interval_enclosure_contains_values() {
        let p = UPoly::from_ints(&[1, -3, 0, 1]);
        let (lo, hi) = eval_interval(&p, &rat(-1, 2), &rat(3, 2));
        for k in -2..=6 {
            let x = rat(k, 4);
            let v = p.eval(&x);
            assert!(lo <= v && v <= hi);
        }
    }
}
