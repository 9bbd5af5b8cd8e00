//! Real root isolation with Sturm sequences.
//!
//! All endpoints are exact rationals. Isolating boxes are half-open
//! `(low, high]` and their endpoints are never roots of the polynomial.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::rat::{int, midpoint, Rat, RatStr};
use super::upoly::UPoly;
use super::ExactError;

/// Isolating interval `(low, high]` for exactly one real root.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootBox {
    pub low: Rat,
    pub high: Rat,
    /// The boxed root is a simple root of the original (not squarefree-reduced) polynomial.
    pub simple: bool,
}

impl RootBox {
    pub fn width(&self) -> Rat {
        &self.high - &self.low
    }

    pub fn contains(&self, q: &Rat) -> bool {
        &self.low < q && q <= &self.high
    }

    pub fn to_json(&self) -> RootBoxJson {
        RootBoxJson {
            low: RatStr(self.low.clone()),
            high: RatStr(self.high.clone()),
            simple: self.simple,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootBoxJson {
    pub low: RatStr,
    pub high: RatStr,
    pub simple: bool,
}

/// Sturm chain `p, p', -rem(p, p'), ...` for a squarefree `p`.
#[derive(Clone, Debug)]
pub struct SturmChain {
    seq: Vec<UPoly>,
}

impl SturmChain {
    pub fn new(p: &UPoly) -> Self {
        let mut seq = vec![p.clone()];
        let d = p.derivative();
        if !d.is_zero() {
            seq.push(d);
            loop {
                let n = seq.len();
                let r = seq[n - 2].rem(&seq[n - 1]);
                if r.is_zero() {
                    break;
                }
                seq.push(-&r);
            }
        }
        SturmChain { seq }
    }

    pub fn polys(&self) -> &[UPoly] {
        &self.seq
    }

    fn variations(signs: impl Iterator<Item = i8>) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for s in signs.filter(|s| *s != 0) {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    pub fn variations_at(&self, q: &Rat) -> usize {
        Self::variations(self.seq.iter().map(|p| p.sign_at(q)))
    }

    pub fn variations_at_infinity(&self, pos: bool) -> usize {
        Self::variations(self.seq.iter().map(|p| p.sign_at_infinity(pos)))
    }

    /// Number of distinct real roots in `(lo, hi]`.
    pub fn count_in(&self, lo: &Rat, hi: &Rat) -> usize {
        self.variations_at(lo) - self.variations_at(hi)
    }

    pub fn count_all(&self) -> usize {
        self.variations_at_infinity(false) - self.variations_at_infinity(true)
    }
}

/// Exact sign of `p(q)`.
pub fn poly_sign_at(p: &UPoly, q: &Rat) -> i8 {
    p.sign_at(q)
}

/// Number of distinct real roots of `p` in `(lo, hi]`.
pub fn count_roots_in(p: &UPoly, lo: &Rat, hi: &Rat) -> usize {
    if p.degree().unwrap_or(0) == 0 {
        return 0;
    }
    SturmChain::new(&p.squarefree_part()).count_in(lo, hi)
}

pub fn count_real_roots(p: &UPoly) -> usize {
    if p.degree().unwrap_or(0) == 0 {
        return 0;
    }
    SturmChain::new(&p.squarefree_part()).count_all()
}

/// A split point strictly inside `(lo, hi)` that is not a root of `s`.
fn split_point(s: &UPoly, lo: &Rat, hi: &Rat) -> Rat {
    let mid = midpoint(lo, hi);
    if !s.eval(&mid).is_zero() {
        return mid;
    }
    // `s` has finitely many roots; one of these nearby fractions avoids them.
    let w = hi - lo;
    (3..)
        .map(|k| lo + &w * Rat::new(k.into(), (2 * k + 1).into()))
        .find(|m| !s.eval(m).is_zero())
        .expect("finitely many roots")
}

/// Isolates every distinct real root of `p`, in increasing order.
pub fn isolate_real_roots(p: &UPoly) -> Result<Vec<RootBox>, ExactError> {
    if p.is_zero() {
        return Err(ExactError::ZeroPolynomial);
    }
    if p.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let s = p.squarefree_part();
    let chain = SturmChain::new(&s);
    let total = chain.count_all();
    if total == 0 {
        return Ok(Vec::new());
    }
    let b = s.cauchy_bound();
    let mut stack = vec![(
        -b.clone(),
        chain.variations_at(&-b.clone()),
        b.clone(),
        chain.variations_at(&b),
    )];
    let mut out = Vec::with_capacity(total);
    while let Some((lo, vlo, hi, vhi)) = stack.pop() {
        match vlo - vhi {
            0 => {}
            1 => out.push((lo, hi)),
            _ => {
                let m = split_point(&s, &lo, &hi);
                let vm = chain.variations_at(&m);
                stack.push((m.clone(), vm, hi, vhi));
                stack.push((lo, vlo, m, vm));
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));

    // Multiplicity: a root is repeated iff it is also a root of gcd(p, p').
    let g = p.gcd(&p.derivative());
    let repeated = (g.degree().unwrap_or(0) > 0).then(|| SturmChain::new(&g.squarefree_part()));
    Ok(out
        .into_iter()
        .map(|(low, high)| {
            let simple = repeated
                .as_ref()
                .is_none_or(|c| c.count_in(&low, &high) == 0);
            RootBox { low, high, simple }
        })
        .collect())
}

/// Shrinks `b` by bisection until `high - low < width`. The returned box
/// contains the same root and still satisfies the endpoint convention.
pub fn refine_box(p: &UPoly, b: &RootBox, width: &Rat) -> RootBox {
    if &b.width() < width {
        return b.clone();
    }
    let s = p.squarefree_part();
    let (mut lo, mut hi) = (b.low.clone(), b.high.clone());
    let mut s_hi = s.sign_at(&hi);
    if s_hi == 0 {
        // Endpoint is the root itself; give it a box of its own.
        return box_around_exact_root(&s, &hi, width, b.simple);
    }
    while &(&hi - &lo) >= width {
        let mid = midpoint(&lo, &hi);
        let sm = s.sign_at(&mid);
        if sm == 0 {
            return box_around_exact_root(&s, &mid, width, b.simple);
        }
        if sm == s_hi {
            hi = mid;
            s_hi = sm;
        } else {
            lo = mid;
        }
    }
    RootBox {
        low: lo,
        high: hi,
        simple: b.simple,
    }
}

/// Box of width `< width` around the rational root `r` of squarefree `s`
/// with no other root inside and non-root endpoints.
fn box_around_exact_root(s: &UPoly, r: &Rat, width: &Rat, simple: bool) -> RootBox {
    let chain = SturmChain::new(s);
    let mut d = width / int(4);
    loop {
        let lo = r - &d;
        let hi = r + &d;
        if s.sign_at(&lo) != 0 && s.sign_at(&hi) != 0 && chain.count_in(&lo, &hi) == 1 {
            return RootBox {
                low: lo,
                high: hi,
                simple,
            };
        }
        d /= int(2);
    }
}

/// Refines until the box excludes `q` or `q` is found to be the root;
/// returns the comparison of the root with `q`.
pub fn compare_root_with(p: &UPoly, b: &RootBox, q: &Rat) -> (std::cmp::Ordering, RootBox) {
    use std::cmp::Ordering;
    let s = p.squarefree_part();
    if s.eval(q).is_zero() && b.contains(q) {
        return (Ordering::Equal, b.clone());
    }
    let mut cur = b.clone();
    loop {
        if q <= &cur.low {
            return (Ordering::Greater, cur);
        }
        if q >= &cur.high {
            // q == high is impossible since endpoints are not roots and q is in the box only if root
            return (Ordering::Less, cur);
        }
        let w = cur.width() / int(2);
        cur = refine_box(&s, &cur, &w);
    }
}

/// Chooses a rational strictly inside the box (the midpoint) that is not the root.
pub fn sample_in(p: &UPoly, b: &RootBox) -> Rat {
    split_point(&p.squarefree_part(), &b.low, &b.high)
}

/// Total count check used by tests: `(-H, H]` with `H` past the Cauchy bound.
pub fn count_in_cauchy_box(p: &UPoly) -> usize {
    let s = p.squarefree_part();
    let h = s.cauchy_bound() + Rat::one();
    SturmChain::new(&s).count_in(&-h.clone(), &h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::rat;

    fn roots_in(b: &RootBox, r: i64) -> bool {
        b.contains(&int(r))
    }

    #[test]
    fn cubic_with_three_roots() {
        let p = UPoly::from_ints(&[0, -4, 0, 1]);
        let bs = isolate_real_roots(&p).unwrap();
        assert_eq!(bs.len(), 3);
        assert!(roots_in(&bs[0], -2) && roots_in(&bs[1], 0) && roots_in(&bs[2], 2));
        for w in bs.windows(2) {
            assert!(w[0].high <= w[1].low);
        }
        for b in &bs {
            assert!(b.simple);
            assert_ne!(p.sign_at(&b.low), 0);
            assert_ne!(p.sign_at(&b.high), 0);
        }
    }

    #[test]
    fn one_real_root_by_discriminant() {
        // disc(x^3 + x + 1) = -4 - 27 = -31 < 0
        let p = UPoly::from_ints(&[1, 1, 0, 1]);
        assert_eq!(isolate_real_roots(&p).unwrap().len(), 1);
    }

    #[test]
    fn no_real_roots() {
        let p = UPoly::from_ints(&[1, 1, 0, 0, 1]);
        assert!(isolate_real_roots(&p).unwrap().is_empty());
        assert_eq!(SturmChain::new(&p).count_all(), 0);
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert!(matches!(
            isolate_real_roots(&UPoly::zero()),
            Err(ExactError::ZeroPolynomial)
        ));
    }

    #[test]
    fn signs() {
        let p = UPoly::from_ints(&[0, -4, 0, 1]);
        assert_eq!(poly_sign_at(&p, &int(1)), -1);
        assert_eq!(poly_sign_at(&p, &int(0)), 0);
        assert_eq!(
            poly_sign_at(&UPoly::from_ints(&[1, 1, 0, 0, 1]), &int(-1)),
            1
        );
    }

    #[test]
    fn refine_around_two() {
        let p = UPoly::from_ints(&[0, -4, 0, 1]);
        let b = isolate_real_roots(&p).unwrap().pop().unwrap();
        let r = refine_box(&p, &b, &rat(1, 100));
        assert!(r.width() < rat(1, 100));
        assert!(r.low >= rat(199, 100) - rat(1, 100) && r.high <= rat(201, 100) + rat(1, 100));
        assert!(r.contains(&int(2)));
    }

    #[test]
    fn refine_sqrt_two() {
        let p = UPoly::from_ints(&[-2, 0, 1]);
        let b = RootBox {
            low: int(1),
            high: int(2),
            simple: true,
        };
        let r = refine_box(&p, &b, &rat(1, 8));
        assert!(r.width() < rat(1, 8));
        // oracle: bisection by squaring endpoints
        assert!(&r.low * &r.low < int(2) && &r.high * &r.high > int(2));
    }

    #[test]
    fn refine_noop_when_already_narrow() {
        let p = UPoly::from_ints(&[-2, 0, 1]);
        let b = RootBox {
            low: int(1),
            high: int(2),
            simple: true,
        };
        assert_eq!(refine_box(&p, &b, &int(5)), b);
    }

    #[test]
    fn multiplicity_flag() {
        // (x - 1)^2 (x + 3)
        let p = &UPoly::from_ints(&[-1, 1]).pow(2) * &UPoly::from_ints(&[3, 1]);
        let bs = isolate_real_roots(&p).unwrap();
        assert_eq!(bs.len(), 2);
        assert!(bs[0].simple);
        assert!(!bs[1].simple);
    }

    #[test]
    fn compare_with_rationals() {
        use std::cmp::Ordering;
        let p = UPoly::from_ints(&[-2, 0, 1]);
        let b = RootBox {
            low: int(1),
            high: int(2),
            simple: true,
        };
        assert_eq!(
            compare_root_with(&p, &b, &rat(141, 100)).0,
            Ordering::Greater
        );
        assert_eq!(compare_root_with(&p, &b, &rat(142, 100)).0, Ordering::Less);
        let q = UPoly::from_ints(&[0, -4, 0, 1]);
        let b0 = isolate_real_roots(&q).unwrap()[1].clone();
        assert_eq!(compare_root_with(&q, &b0, &int(0)).0, Ordering::Equal);
    }
}
