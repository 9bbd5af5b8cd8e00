mod common;

use common::{nonzero_rat, small_rat};
use kf_core::exact::mpoly::Monomial;
use kf_core::exact::rat::{int, rat, simplest_in_open};
use kf_core::exact::resultant::{constant_coeffs, resultant};
use kf_core::exact::sturm::{count_roots_in, refine_box, SturmChain};
use kf_core::exact::{count_real_roots, isolate_real_roots, parse_ratfunc, ratfunc_equal};
use kf_core::{MPoly, Rat, RatFunc, UPoly, Var};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn mpoly() -> impl Strategy<Value = MPoly> {
    prop::collection::vec((small_rat(5), 0u32..3, 0u32..3, 0u32..3), 0..5).prop_map(|ts| {
        MPoly::from_terms(ts.into_iter().map(|(c, ea, eb, eu)| {
            let m = Monomial::var(Var::A, ea)
                .mul(&Monomial::var(Var::B, eb))
                .mul(&Monomial::var(Var::U, eu));
            (m, c)
        }))
    })
}

fn upoly(max_deg: usize) -> impl Strategy<Value = UPoly> {
    prop::collection::vec(small_rat(6), 1..=max_deg + 1).prop_map(UPoly::new)
}

fn at(a: Rat, b: Rat, u: Rat) -> impl Fn(Var) -> Option<Rat> {
    move |v| match v {
        Var::A => Some(a.clone()),
        Var::B => Some(b.clone()),
        Var::U => Some(u.clone()),
        _ => None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ring_axioms(p in mpoly(), q in mpoly(), r in mpoly()) {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
        prop_assert_eq!(&p * &MPoly::one(), p.clone());
    }

    #[test]
    fn evaluation_is_a_homomorphism(p in mpoly(), q in mpoly(), a in small_rat(4), b in small_rat(4), u in small_rat(4)) {
        let e = at(a, b, u);
        let (pv, qv) = (p.eval(&e).unwrap(), q.eval(&e).unwrap());
        prop_assert_eq!((&p * &q).eval(&e).unwrap(), &pv * &qv);
        prop_assert_eq!((&p + &q).eval(&e).unwrap(), pv + qv);
    }

    #[test]
    fn ratfunc_canonical_form(p in mpoly(), q in mpoly().prop_filter("nonzero", |q| !q.is_zero()), s in mpoly().prop_filter("nonzero", |s| !s.is_zero())) {
        // p/q and (p s)/(q s) have identical representations
        let f = RatFunc::new(p.clone(), q.clone()).unwrap();
        let g = RatFunc::new(&p * &s, &q * &s).unwrap();
        prop_assert_eq!(&f, &g);
        prop_assert!(ratfunc_equal(&f, &g));
        if !f.is_zero() {
            prop_assert_eq!(&f * &f.inv().unwrap(), RatFunc::one());
        }
    }

    #[test]
    fn sign_matches_evaluation(p in upoly(6), x in small_rat(8)) {
        let v = p.eval(&x);
        let expected = if v.is_zero() { 0 } else if v.is_positive() { 1 } else { -1 };
        prop_assert_eq!(p.sign_at(&x), expected);
    }

    #[test]
    fn sturm_counts_distinct_linear_factors(roots in prop::collection::btree_set(-20i64..=20, 0..6), lo in -25i64..=25, width in 1i64..=30) {
        let mut p = UPoly::one();
        for r in &roots {
            p = &p * &UPoly::new(vec![rat(-*r, 2), int(1)]);
        }
        let hi = lo + width;
        // roots r/2 in (lo/2, hi/2]
        let expected = roots.iter().filter(|r| **r > lo && **r <= hi).count();
        prop_assert_eq!(count_roots_in(&p, &rat(lo, 2), &rat(hi, 2)), expected);
        prop_assert_eq!(SturmChain::new(&p).count_all(), roots.len());
        prop_assert_eq!(count_real_roots(&p), roots.len());
        let boxes = isolate_real_roots(&p).unwrap();
        prop_assert_eq!(boxes.len(), roots.len());
        for (b, r) in boxes.iter().zip(roots.iter()) {
            prop_assert!(b.low < rat(*r, 2) && rat(*r, 2) <= b.high);
        }
    }

    #[test]
    fn refinement_keeps_exactly_one_root(p in upoly(5).prop_filter("nonconstant", |p| p.degree().unwrap_or(0) > 0), k in 1u32..40) {
        let sq = p.squarefree_part();
        let w = Rat::new(1.into(), num_bigint::BigInt::from(2).pow(k));
        for b in isolate_real_roots(&sq).unwrap() {
            let r = refine_box(&sq, &b, &w);
            prop_assert!(r.high.clone() - r.low.clone() < w);
            prop_assert!(b.low <= r.low && r.high <= b.high);
            prop_assert_eq!(count_roots_in(&sq, &r.low, &r.high), 1);
        }
    }

    #[test]
    fn resultant_of_split_polynomials(a in prop::collection::vec(-6i64..=6, 1..4), b in prop::collection::vec(-6i64..=6, 1..4)) {
        // Res(prod (x - a_i), prod (x - b_j)) = prod (a_i - b_j)
        let lin = |r: i64| constant_coeffs(&UPoly::from_ints(&[-r, 1]));
        let prod = |rs: &[i64]| rs.iter().fold(vec![UPoly::one()], |acc, r| {
            let l = lin(*r);
            let mut out = vec![UPoly::zero(); acc.len() + 1];
            for (i, c) in acc.iter().enumerate() {
                out[i] = &out[i] + &(c * &l[0]);
                out[i + 1] = &out[i + 1] + &(c * &l[1]);
            }
            out
        });
        let expected: i64 = a.iter().flat_map(|x| b.iter().map(move |y| x - y)).product();
        let res = resultant(&prod(&a), &prod(&b));
        prop_assert_eq!(res, UPoly::from_ints(&[expected]));
    }

    #[test]
    fn simplest_rational_is_simplest(lo in small_rat(30), w in nonzero_rat(30)) {
        let hi = &lo + w.abs();
        let s = simplest_in_open(Some(&lo), Some(&hi));
        prop_assert!(lo < s && s < hi);
        for d in 1..s.denom().try_into().unwrap_or(1i64) {
            let n = (&lo * int(d)).floor() + Rat::one();
            prop_assert!(n / int(d) >= hi);
        }
    }
}

#[test]
fn parse_display_roundtrip() {
    for s in [
        "(du^6-b)/(a-cu^4)",
        "((d^2/c^4)u^8-2dau^4+c^4a^2)/u^6",
        "x/(2y)",
        "u^3",
    ] {
        let f = parse_ratfunc(s).unwrap();
        let again = parse_ratfunc(&f.to_string()).unwrap();
        assert_eq!(f, again, "{s}");
    }
}
