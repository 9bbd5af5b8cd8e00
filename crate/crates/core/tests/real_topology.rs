mod common;

use common::{
    census_catalog, cubic_has_three_real_roots, flood_fill_census, nonzero_rat, small_rat,
};
use kf_core::exact::rat::{int, rat};
use kf_core::exact::sturm::refine_box;
use kf_core::surface::census::Bound;
use kf_core::{assumption_bounds_check, oval_contains, real_component_census, Rat, RootBox, UPoly};
use num_traits::{Signed, ToPrimitive};
use proptest::prelude::*;

fn bound_f64(p: &UPoly, b: &Bound) -> Option<f64> {
    match b {
        Bound::Root { low, high } => {
            let r = refine_box(
                p,
                &RootBox {
                    low: low.0.clone(),
                    high: high.0.clone(),
                    simple: true,
                },
                &rat(1, 1 << 30),
            );
            Some(((&r.low + &r.high) / int(2)).to_f64().unwrap())
        }
        _ => None,
    }
}

#[test]
fn census_matches_flood_fill_on_catalog() {
    for (name, curve) in census_catalog() {
        let census = real_component_census(&curve).unwrap();
        let grid = flood_fill_census(&curve, 64);
        assert_eq!(census.count, grid.count, "{name}");
        let bounded: Vec<_> = census
            .components
            .iter()
            .filter(|c| c.is_bounded())
            .collect();
        assert_eq!(bounded.len(), grid.bounded.len(), "{name}");
        for (c, (lo, hi)) in bounded.iter().zip(&grid.bounded) {
            let p = census.boundary();
            let (clo, chi) = (
                bound_f64(&p, &c.low).unwrap(),
                bound_f64(&p, &c.high).unwrap(),
            );
            assert!(
                (clo - lo).abs() <= 2.0 / 64.0 && (chi - hi).abs() <= 2.0 / 64.0,
                "{name}: {clo}..{chi} vs {lo}..{hi}"
            );
        }
    }
}

#[test]
fn oval_of_the_two_component_fiber() {
    let (_, curve) = census_catalog().remove(0);
    let census = real_component_census(&curve).unwrap();
    let oval = census.oval.as_ref().unwrap();
    assert!((bound_f64(&census.boundary(), &oval.low).unwrap() + 2.0).abs() < 1e-6);
    assert!(bound_f64(&census.boundary(), &oval.high).unwrap().abs() < 1e-6);
    for (x, inside) in [
        (int(-2), true),
        (int(-1), true),
        (int(0), true),
        (rat(1, 1000), false),
        (int(3), false),
    ] {
        assert_eq!(oval_contains(&census, &x).unwrap(), inside, "x = {x}");
    }
}

#[test]
fn bounds_check_examples() {
    let g = UPoly::from_ints(&[0, -4, 0, 1]);
    let f = UPoly::from_ints(&[1, 0, 0, 0, 1]);
    assert!(assumption_bounds_check(&g, &f, &int(0), &int(1)));
    assert!(!assumption_bounds_check(&g, &f, &int(0), &int(2)));
}

fn three_root_cubic() -> impl Strategy<Value = (Rat, Rat, Rat)> {
    (small_rat(6), small_rat(6), small_rat(6)).prop_map(|(r1, d1, d2)| {
        let r2 = &r1 + d1.abs() + rat(1, 7);
        let r3 = &r2 + d2.abs() + rat(1, 5);
        (r1, r2, r3)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bounds_check_agrees_with_discriminant((r1, r2, r3) in three_root_cubic(), t1 in small_rat(4), y0 in nonzero_rat(5), lin in small_rat(4)) {
        // g = (x - r1)(x - r2)(x - r3), f = t^2 + lin t + 1
        let g = &(&UPoly::new(vec![-r1.clone(), int(1)]) * &UPoly::new(vec![-r2.clone(), int(1)])) * &UPoly::new(vec![-r3.clone(), int(1)]);
        let f = UPoly::new(vec![int(1), lin, int(1)]);
        let v = f.eval(&t1) * &y0 * &y0;
        let c = g.coeffs();
        let expected = cubic_has_three_real_roots(&c[2], &c[1], &(&c[0] - &v));
        prop_assert_eq!(assumption_bounds_check(&g, &f, &t1, &y0), expected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn census_matches_flood_fill_on_random_fibers(r1 in -3i64..=1, g1 in 1i64..=2, g2 in 1i64..=2, w in prop::sample::select(vec![-2i64, -1, 1, 2]), lift in 0i64..=1) {
        // three separated roots, optionally lifted to one real root
        let (r2, r3) = (r1 + g1, r1 + g1 + g2);
        let g = &(&UPoly::from_ints(&[-r1, 1]) * &UPoly::from_ints(&[-r2, 1])) * &UPoly::from_ints(&[-r3, 1]);
        let g = &g + &UPoly::from_ints(&[lift * 40]);
        let curve = kf_core::SeparatedCurve { g, w: int(w), h: UPoly::from_ints(&[0, 0, 1]) };
        let census = real_component_census(&curve).unwrap();
        let grid = common::flood_fill_census(&curve, 32);
        prop_assert_eq!(census.count, grid.count);
    }
}
