mod common;

use common::{naive_add, naive_order, nonzero_rat, small_rat, torsion_catalog};
use kf_core::exact::rat::{int, rat};
use kf_core::*;
use num_traits::Zero;
use proptest::prelude::*;

/// A nonsingular curve through two chosen points, with a third point in their span.
fn curve_with_points() -> impl Strategy<Value = (WeierstrassCurve, ECPoint, ECPoint, ECPoint)> {
    (small_rat(5), small_rat(5), small_rat(5), small_rat(5)).prop_filter_map(
        "degenerate",
        |(x1, y1, x2, y2)| {
            if x1 == x2 {
                return None;
            }
            let a = (&y1 * &y1 - &y2 * &y2 - &x1 * &x1 * &x1 + &x2 * &x2 * &x2) / (&x1 - &x2);
            let b = &y1 * &y1 - &x1 * &x1 * &x1 - &a * &x1;
            let e = WeierstrassCurve::new(a.clone(), b).ok()?;
            let p = Some((x1, y1));
            let q = Some((x2, y2));
            let r = naive_add(&a, &naive_add(&a, &p, &p), &q.clone().map(|(x, y)| (x, -y)));
            let pt =
                |o: Option<(Rat, Rat)>| o.map_or(ECPoint::Infinity, |(x, y)| ECPoint::affine(x, y));
            Some((e, pt(p), pt(q), pt(r)))
        },
    )
}

fn to_naive(p: &ECPoint) -> Option<(Rat, Rat)> {
    p.x().map(|x| (x.clone(), p.y().unwrap().clone()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn group_law_axioms((e, p, q, r) in curve_with_points()) {
        prop_assert!(e.contains(&p) && e.contains(&q) && e.contains(&r));
        let add = |a: &ECPoint, b: &ECPoint| ec_add(&e, a, b).unwrap();
        prop_assert_eq!(add(&add(&p, &q), &r), add(&p, &add(&q, &r)));
        prop_assert_eq!(add(&p, &q), add(&q, &p));
        prop_assert_eq!(add(&p, &p.neg()), ECPoint::Infinity);
        prop_assert_eq!(add(&p, &ECPoint::Infinity), p.clone());
        prop_assert_eq!(to_naive(&add(&p, &q)), naive_add(e.a(), &to_naive(&p), &to_naive(&q)));
        prop_assert_eq!(ec_mul(&e, 3, &p).unwrap(), add(&add(&p, &p), &p));
        prop_assert_eq!(ec_mul(&e, -2, &p).unwrap(), add(&p, &p).neg());
    }

    #[test]
    fn square_twist_is_an_isomorphism((e, p, q, _r) in curve_with_points(), s in nonzero_rat(6)) {
        // points of s^2 y^2 = rhs(x) are (x, y/s) for (x, y) on E
        let (es, map) = quadratic_twist(&e, &(&s * &s)).unwrap();
        let fwd = |pt: &ECPoint| match pt {
            ECPoint::Infinity => ECPoint::Infinity,
            ECPoint::Affine(x, y) => map.forward(x, &(y / &s)),
        };
        prop_assert!(es.contains(&fwd(&p)));
        prop_assert_eq!(fwd(&ec_add(&e, &p, &q).unwrap()), ec_add(&es, &fwd(&p), &fwd(&q)).unwrap());
        let back = map.backward(&fwd(&p));
        prop_assert_eq!(back, p.x().map(|x| (x.clone(), p.y().unwrap() / &s)));
    }

    #[test]
    fn twist_lands_on_twisted_curve(a in small_rat(5), b in small_rat(5), x in small_rat(5), y in nonzero_rat(5)) {
        let Ok(e) = WeierstrassCurve::new(a, b) else { return Ok(()) };
        let q = e.rhs(&x) / (&y * &y);
        if q.is_zero() {
            return Ok(());
        }
        let (eq, map) = quadratic_twist(&e, &q).unwrap();
        prop_assert!(eq.contains(&map.forward(&x, &y)));
        prop_assert_eq!(eq.a(), &(&q * &q * e.a()));
        prop_assert_eq!(eq.b(), &(&q * &q * &q * e.b()));
    }

    #[test]
    fn integral_model_preserves_order((e, p, _q, _r) in curve_with_points()) {
        let (ei, pi, lambda) = to_integral_model(&e, &p);
        prop_assert!(!lambda.is_zero());
        prop_assert!(ei.a().is_integer() && ei.b().is_integer());
        prop_assert!(ei.contains(&pi));
        let v = torsion_test(&e, &p).unwrap();
        let expected = naive_order(e.a(), &to_naive(&p));
        match v {
            TorsionVerdict::Torsion { order } => prop_assert_eq!(Some(order), expected),
            TorsionVerdict::NonTorsion { .. } => prop_assert_eq!(expected, None),
        }
    }
}

#[test]
fn torsion_examples() {
    let e = WeierstrassCurve::from_ints(0, 1).unwrap();
    assert_eq!(
        torsion_test(&e, &ECPoint::affine(int(2), int(3))).unwrap(),
        TorsionVerdict::Torsion { order: 6 }
    );
    let e = WeierstrassCurve::from_ints(-4, 0).unwrap();
    assert_eq!(
        torsion_test(&e, &ECPoint::affine(int(0), int(0))).unwrap(),
        TorsionVerdict::Torsion { order: 2 }
    );
    let e = WeierstrassCurve::from_ints(0, -2).unwrap();
    assert!(!torsion_test(&e, &ECPoint::affine(int(3), int(5)))
        .unwrap()
        .is_torsion());
    let e = WeierstrassCurve::from_ints(-43, 166).unwrap();
    assert_eq!(
        torsion_test(&e, &ECPoint::affine(int(3), int(8))).unwrap(),
        TorsionVerdict::Torsion { order: 7 }
    );
}

#[test]
fn torsion_agrees_with_repeated_addition_on_catalog() {
    let cat = torsion_catalog();
    assert!(cat.len() >= 30);
    let mut torsion = 0;
    for (a, b, x, y) in cat {
        let e = WeierstrassCurve::new(a.clone(), b.clone()).unwrap();
        let p = ECPoint::affine(x.clone(), y.clone());
        let expected = naive_order(&a, &Some((x, y)));
        let got = torsion_test(&e, &p).unwrap();
        assert_eq!(got.is_torsion(), expected.is_some(), "A={a} B={b}");
        if let TorsionVerdict::Torsion { order } = got {
            assert_eq!(Some(order), expected);
            torsion += 1;
        }
        assert_eq!(
            kf_core::elliptic::torsion_order_brute_force(&e, &p),
            expected
        );
    }
    assert!(torsion >= 5);
}

#[test]
fn verdict_json_shape() {
    let v = TorsionVerdict::Torsion { order: 6 };
    assert_eq!(
        serde_json::to_string(&v).unwrap(),
        r#"{"verdict":"torsion","order":6}"#
    );
    let e: WeierstrassCurve = serde_json::from_str(r#"{"A":"0","B":"1"}"#).unwrap();
    assert_eq!(e, WeierstrassCurve::from_ints(0, 1).unwrap());
    assert!(serde_json::from_str::<WeierstrassCurve>(r#"{"A":"0","B":"0"}"#).is_err());
    let p: ECPoint = serde_json::from_str(r#"["2","3"]"#).unwrap();
    assert_eq!(p, ECPoint::affine(int(2), int(3)));
    assert_eq!(
        serde_json::to_string(&ECPoint::affine(rat(1, 4), int(-1))).unwrap(),
        r#"["1/4","-1"]"#
    );
}
