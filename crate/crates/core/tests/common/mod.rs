//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::VecDeque;

use kf_core::exact::rat::{int, rat};
use kf_core::exact::sturm::{isolate_real_roots, refine_box};
use kf_core::surface::SeparatedCurve;
use kf_core::{Rat, UPoly};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;

pub fn small_rat(max: i64) -> impl Strategy<Value = Rat> {
    (-max..=max, 1..=max).prop_map(|(n, d)| rat(n, d))
}

pub fn nonzero_rat(max: i64) -> impl Strategy<Value = Rat> {
    small_rat(max).prop_filter("nonzero", |q| !q.is_zero())
}

/// Textbook affine chord-tangent addition on `y^2 = x^3 + a x + b`; `None` is the identity.
pub fn naive_add(a: &Rat, p: &Option<(Rat, Rat)>, q: &Option<(Rat, Rat)>) -> Option<(Rat, Rat)> {
    let (Some((x1, y1)), Some((x2, y2))) = (p, q) else {
        return p.clone().or_else(|| q.clone());
    };
    let lambda = if x1 != x2 {
        (y2 - y1) / (x2 - x1)
    } else if y1 == y2 && !y1.is_zero() {
        (int(3) * x1 * x1 + a) / (int(2) * y1)
    } else {
        return None;
    };
    let x3 = &lambda * &lambda - x1 - x2;
    let y3 = lambda * (x1 - &x3) - y1;
    Some((x3, y3))
}

/// Order by repeated addition, up to the largest possible rational torsion order.
pub fn naive_order(a: &Rat, p: &Option<(Rat, Rat)>) -> Option<u32> {
    let mut acc = p.clone();
    for n in 1..=12 {
        if acc.is_none() {
            return Some(n);
        }
        acc = naive_add(a, &acc, p);
    }
    None
}

/// Three distinct real roots of `x^3 + b x^2 + c x + d`, by the discriminant.
pub fn cubic_has_three_real_roots(b: &Rat, c: &Rat, d: &Rat) -> bool {
    let disc = int(18) * b * c * d - int(4) * b * b * b * d + b * b * c * c
        - int(4) * c * c * c
        - int(27) * d * d;
    disc > Rat::zero()
}

fn approx_roots(p: &UPoly) -> Vec<f64> {
    let p = p.squarefree_part();
    isolate_real_roots(&p)
        .unwrap_or_default()
        .iter()
        .map(|b| refine_box(&p, b, &rat(1, 64)))
        .map(|b| ((&b.low + &b.high) / int(2)).to_f64().unwrap())
        .collect()
}

fn f64_rat(v: f64) -> Rat {
    Rat::from_float(v).unwrap_or_else(Rat::zero)
}

/// Grid-based component census of `g(x) = w h(s)` on a box containing every
/// critical point, at spacing `1/n`.
pub struct FloodFill {
    pub count: usize,
    /// x-extents of components not touching the box boundary.
    pub bounded: Vec<(f64, f64)>,
}

pub fn flood_fill_census(c: &SeparatedCurve, n: i64) -> FloodFill {
    let phi = c.g.clone();
    let psi = c.h.scale(&c.w);
    let mut xs: Vec<f64> = vec![-1.0, 0.0, 1.0];
    let mut ss: Vec<f64> = vec![-1.0, 0.0, 1.0];
    xs.extend(approx_roots(&phi));
    xs.extend(approx_roots(&phi.derivative()));
    ss.extend(approx_roots(&psi));
    ss.extend(approx_roots(&psi.derivative()));
    // x where the fiber degenerates and s where the x-fiber degenerates
    for s in approx_roots(&psi.derivative()) {
        let v = psi.eval(&f64_rat(s));
        xs.extend(approx_roots(&(&phi - &UPoly::constant(v))));
    }
    for x in approx_roots(&phi.derivative()) {
        let v = phi.eval(&f64_rat(x));
        ss.extend(approx_roots(&(&psi - &UPoly::constant(v))));
    }
    let range = |v: &[f64]| {
        let lo = v.iter().cloned().fold(f64::INFINITY, f64::min).floor() as i64 - 1;
        let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max).ceil() as i64 + 1;
        (lo * n, hi * n)
    };
    let (x0, x1) = range(&xs);
    let (s0, s1) = range(&ss);
    let gv: Vec<Rat> = (x0..=x1).map(|i| phi.eval(&rat(i, n))).collect();
    let hv: Vec<Rat> = (s0..=s1).map(|j| psi.eval(&rat(j, n))).collect();
    let l = gv
        .iter()
        .chain(hv.iter())
        .fold(BigInt::one(), |l, q| l.lcm(q.denom()));
    let scale = |q: &Rat| {
        (q.numer() * (&l / q.denom()))
            .to_i128()
            .expect("grid values fit in i128")
    };
    let gi: Vec<i128> = gv.iter().map(scale).collect();
    let hi: Vec<i128> = hv.iter().map(scale).collect();
    let (nx, ns) = (gi.len(), hi.len());
    let sgn = |i: usize, j: usize| (gi[i] - hi[j]).signum();
    let crossed = |a: i128, b: i128| a == 0 || b == 0 || a != b;
    // cell (i, j) spans vertices (i..=i+1, j..=j+1)
    let right_edge = |i: usize, j: usize| crossed(sgn(i + 1, j), sgn(i + 1, j + 1));
    let top_edge = |i: usize, j: usize| crossed(sgn(i, j + 1), sgn(i + 1, j + 1));
    let left_edge = |i: usize, j: usize| crossed(sgn(i, j), sgn(i, j + 1));
    let bottom_edge = |i: usize, j: usize| crossed(sgn(i, j), sgn(i + 1, j));
    let (cx, cs) = (nx - 1, ns - 1);
    let active = |i: usize, j: usize| {
        right_edge(i, j) || top_edge(i, j) || left_edge(i, j) || bottom_edge(i, j)
    };
    let mut seen = vec![false; cx * cs];
    let mut count = 0;
    let mut bounded = Vec::new();
    for i0 in 0..cx {
        for j0 in 0..cs {
            if seen[i0 * cs + j0] || !active(i0, j0) {
                continue;
            }
            count += 1;
            let mut touches = false;
            let (mut lo, mut hi_x) = (i0, i0);
            let mut queue = VecDeque::from([(i0, j0)]);
            seen[i0 * cs + j0] = true;
            while let Some((i, j)) = queue.pop_front() {
                lo = lo.min(i);
                hi_x = hi_x.max(i);
                if i == 0 || j == 0 || i + 1 == cx || j + 1 == cs {
                    touches = true;
                }
                let mut visit = |ni: usize, nj: usize, q: &mut VecDeque<(usize, usize)>| {
                    if !seen[ni * cs + nj] {
                        seen[ni * cs + nj] = true;
                        q.push_back((ni, nj));
                    }
                };
                if i + 1 < cx && right_edge(i, j) {
                    visit(i + 1, j, &mut queue);
                }
                if i > 0 && left_edge(i, j) {
                    visit(i - 1, j, &mut queue);
                }
                if j + 1 < cs && top_edge(i, j) {
                    visit(i, j + 1, &mut queue);
                }
                if j > 0 && bottom_edge(i, j) {
                    visit(i, j - 1, &mut queue);
                }
            }
            if !touches {
                let to_x = |i: usize| (x0 + i as i64) as f64 / n as f64;
                bounded.push((to_x(lo), to_x(hi_x + 1)));
            }
        }
    }
    FloodFill { count, bounded }
}

/// Curves `g(x) = w h(s)` with known, well-separated topology.
pub fn census_catalog() -> Vec<(&'static str, SeparatedCurve)> {
    let c = |g: &[i64], w: Rat, h: &[i64]| SeparatedCurve {
        g: UPoly::from_ints(g),
        w,
        h: UPoly::from_ints(h),
    };
    vec![
        ("x^3-4x = s^2", c(&[0, -4, 0, 1], int(1), &[0, 0, 1])),
        ("x^3+x+1 = s^2", c(&[1, 1, 0, 1], int(1), &[0, 0, 1])),
        ("x^3-x = -s^2", c(&[0, -1, 0, 1], int(-1), &[0, 0, 1])),
        ("x^3-4x = s^3+s+1", c(&[0, -4, 0, 1], int(1), &[1, 1, 0, 1])),
        (
            "x^3+x+1 = s^3+2s+3",
            c(&[1, 1, 0, 1], int(1), &[3, 2, 0, 1]),
        ),
        ("x^2 = -(s^2-1)", c(&[0, 0, 1], int(-1), &[-1, 0, 1])),
        ("x^4-5x^2+4 = s^2", c(&[4, 0, -5, 0, 1], int(1), &[0, 0, 1])),
        (
            "x^3-3x = s^3-3s+1/2",
            SeparatedCurve {
                g: UPoly::from_ints(&[0, -3, 0, 1]),
                w: int(1),
                h: UPoly::new(vec![rat(1, 2), int(-3), int(0), int(1)]),
            },
        ),
        (
            "x^3-4x = s^4-3s^2+1",
            c(&[0, -4, 0, 1], int(1), &[1, 0, -3, 0, 1]),
        ),
        ("x^3+x = -3s^2", c(&[0, 1, 0, 1], int(-3), &[0, 0, 1])),
    ]
}

/// `(A, B, x, y)` with the point on `y^2 = x^3 + A x + B`; integral and scaled models.
pub fn torsion_catalog() -> Vec<(Rat, Rat, Rat, Rat)> {
    let mut out: Vec<(Rat, Rat, Rat, Rat)> = vec![
        (int(0), int(1), int(2), int(3)),
        (int(-4), int(0), int(0), int(0)),
        (int(0), int(-2), int(3), int(5)),
        (int(-43), int(166), int(3), int(8)),
        (int(0), int(1), int(0), int(1)),
        (int(0), int(1), int(-1), int(0)),
    ];
    'outer: for a in -6i64..=6 {
        for b in -6i64..=6 {
            if 4 * a * a * a + 27 * b * b == 0 {
                continue;
            }
            for x in -4i64..=8 {
                let r = x * x * x + a * x + b;
                if r < 0 {
                    continue;
                }
                let y = (r as f64).sqrt().round() as i64;
                if y * y == r {
                    out.push((int(a), int(b), int(x), int(y)));
                    if out.len() >= 24 {
                        break 'outer;
                    }
                    break;
                }
            }
        }
    }
    // non-integral models of earlier entries: (x/s^2, y/s^3) on (A/s^4, B/s^6)
    let scaled: Vec<_> = out
        .iter()
        .take(6)
        .map(|(a, b, x, y)| {
            let s = int(2);
            let s2 = &s * &s;
            let s3 = &s2 * &s;
            (a / (&s2 * &s2), b / (&s3 * &s3), x / &s2, y / &s3)
        })
        .collect();
    out.extend(scaled);
    out
}
