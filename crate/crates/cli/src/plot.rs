//! CSV samples of real loci for external plotting.

use std::fmt::Write;

use kf_core::exact::rat::int;
use kf_core::surface::census::real_points_at;
use kf_core::{ComponentCensus, ProjPoint, Rat, SeparatedCurve};
use num_traits::{Signed, ToPrimitive};

pub struct Sample {
    pub x: Rat,
    pub s: Rat,
}

/// Points of the real locus above `samples` evenly spaced x-values that
/// cover every root of the census boundary with a margin.
pub fn locus(curve: &SeparatedCurve, census: &ComponentCensus, samples: u32) -> Vec<Sample> {
    let boundary = census.boundary();
    let bound = if boundary.degree().unwrap_or(0) > 0 {
        boundary.cauchy_bound().abs()
    } else {
        int(0)
    };
    let half = bound.max(int(2)) + int(1);
    let (lo, hi) = (-half.clone(), half);
    let n = samples.max(2);
    let width = Rat::new(1.into(), (1u64 << 24).into());
    (0..n)
        .flat_map(|i| {
            let x = &lo + (&hi - &lo) * Rat::new(i.into(), (n - 1).into());
            real_points_at(curve, &x, &width)
                .into_iter()
                .map(move |s| Sample { x: x.clone(), s })
        })
        .collect()
}

fn f(q: &Rat) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Columns `series,index,x,s`: locus rows first, then the affine walk points.
pub fn csv(locus: &[Sample], walk: &[ProjPoint]) -> String {
    let mut out = String::from("series,index,x,s\n");
    for (i, p) in locus.iter().enumerate() {
        let _ = writeln!(out, "locus,{i},{},{}", f(&p.x), f(&p.s));
    }
    for (i, q) in walk.iter().enumerate() {
        if let Some((x, s)) = q.dehomogenize() {
            let _ = writeln!(out, "walk,{i},{},{}", f(&x), f(&s));
        }
    }
    out
}
