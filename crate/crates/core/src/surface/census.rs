//! Connected components of real curves `g(x) = w h(s)`.
//!
//! Both sides are split into monotone pieces at their critical points. On a
//! product of monotone pieces the curve is empty or a single arc, so the
//! components come from gluing arcs across the critical lines. A sweep over
//! the vertical tangents then assigns each component its x-range.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::SurfaceError;
use crate::exact::algebraic::{eval_interval, AlgebraicReal};
use crate::exact::rat::{fmt_rat, simplest_in_closed, Rat, RatStr};
use crate::exact::resultant::{self, BiPoly};
use crate::exact::sturm::{count_real_roots, isolate_real_roots, RootBox, SturmChain};
use crate::exact::upoly::UPoly;

/// The real curve `g(x) = w h(s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatedCurve {
    pub g: UPoly,
    pub w: Rat,
    pub h: UPoly,
}

impl SeparatedCurve {
    pub fn phi(&self) -> UPoly {
        self.g.clone()
    }

    pub fn psi(&self) -> UPoly {
        self.h.scale(&self.w)
    }

    pub fn eval(&self, x: &Rat, s: &Rat) -> Rat {
        self.g.eval(x) - &self.w * self.h.eval(s)
    }

    /// Real `s` with `(x, s)` on the curve, as isolating boxes.
    pub fn fiber_over(&self, x: &Rat) -> Vec<RootBox> {
        let p = &self.psi() - &UPoly::constant(self.g.eval(x));
        isolate_real_roots(&p).unwrap_or_default()
    }

    pub fn to_json(&self) -> SeparatedCurveJson {
        let cs = |p: &UPoly| p.coeffs().iter().cloned().map(RatStr).collect();
        SeparatedCurveJson {
            g: cs(&self.g),
            w: RatStr(self.w.clone()),
            h: cs(&self.h),
        }
    }

    pub fn from_json(j: &SeparatedCurveJson) -> Self {
        let p = |v: &[RatStr]| UPoly::new(v.iter().map(|r| r.0.clone()).collect());
        SeparatedCurve {
            g: p(&j.g),
            w: j.w.0.clone(),
            h: p(&j.h),
        }
    }
}

/// Coefficients listed from the constant term up.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparatedCurveJson {
    pub g: Vec<RatStr>,
    pub w: RatStr,
    pub h: Vec<RatStr>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Bound {
    NegInf,
    PosInf,
    /// The unique root of the boundary polynomial in `(low, high]`.
    Root {
        low: RatStr,
        high: RatStr,
    },
}

impl Bound {
    fn root(b: &RootBox) -> Self {
        Bound::Root {
            low: RatStr(b.low.clone()),
            high: RatStr(b.high.clone()),
        }
    }

    fn as_box(&self) -> Option<RootBox> {
        match self {
            Bound::Root { low, high } => Some(RootBox {
                low: low.0.clone(),
                high: high.0.clone(),
                simple: true,
            }),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentRange {
    pub low: Bound,
    pub high: Bound,
}

impl ComponentRange {
    pub fn is_bounded(&self) -> bool {
        matches!(
            (&self.low, &self.high),
            (Bound::Root { .. }, Bound::Root { .. })
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentCensus {
    pub curve: SeparatedCurveJson,
    pub count: usize,
    /// Component x-ranges, ordered by their first band.
    pub components: Vec<ComponentRange>,
    /// The bounded component when there are exactly two.
    pub oval: Option<ComponentRange>,
    /// Squarefree polynomial whose roots bound every x-range.
    pub boundary_poly: Vec<RatStr>,
}

impl ComponentCensus {
    pub fn boundary(&self) -> UPoly {
        UPoly::new(self.boundary_poly.iter().map(|r| r.0.clone()).collect())
    }
}

/// Critical points of `p` with their critical values, in increasing order of the point.
fn critical_data(p: &UPoly) -> Vec<(AlgebraicReal, AlgebraicReal)> {
    let dp = p.derivative();
    if dp.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let dsq = dp.squarefree_part();
    // R(v) = Res_x(p(x) - v, p'(x)) vanishes exactly at the critical values.
    let mut lifted: BiPoly = resultant::constant_coeffs(p);
    lifted[0] = &lifted[0] - &UPoly::x();
    let r = resultant::resultant(&lifted, &resultant::constant_coeffs(&dp)).squarefree_part();
    let rchain = SturmChain::new(&r);
    isolate_real_roots(&dsq)
        .expect("nonzero derivative")
        .into_iter()
        .map(|b| {
            let mut c = AlgebraicReal::from_box(&dsq, &b);
            let value = loop {
                if let Some(q) = c.as_rat() {
                    break AlgebraicReal::from_rat(p.eval(q));
                }
                let (lo, hi) = c.bounds();
                let (vlo, vhi) = eval_interval(p, lo, hi);
                if vlo < vhi
                    && r.sign_at(&vlo) != 0
                    && r.sign_at(&vhi) != 0
                    && rchain.count_in(&vlo, &vhi) == 1
                {
                    break AlgebraicReal::from_box(
                        &r,
                        &RootBox {
                            low: vlo,
                            high: vhi,
                            simple: true,
                        },
                    );
                }
                c.refine();
            };
            (c, value)
        })
        .collect()
}

/// Ranks for a list of algebraic values; equal values share a rank.
fn rank_values(vals: &mut [AlgebraicReal]) -> Vec<i64> {
    let mut reps: Vec<AlgebraicReal> = Vec::new();
    for v in vals.iter_mut() {
        match locate(&mut reps, v) {
            Ok(_) => {}
            Err(pos) => reps.insert(pos, v.clone()),
        }
    }
    vals.iter_mut()
        .map(|v| locate(&mut reps, v).expect("value was inserted") as i64)
        .collect()
}

fn locate(reps: &mut [AlgebraicReal], v: &mut AlgebraicReal) -> Result<usize, usize> {
    let (mut lo, mut hi) = (0, reps.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        match reps[mid].cmp_mut(v) {
            Ordering::Less => lo = mid + 1,
            Ordering::Greater => hi = mid,
            Ordering::Equal => return Ok(mid),
        }
    }
    Err(lo)
}

struct Side {
    points: Vec<AlgebraicReal>,
    /// Ranks of the critical values; `NEG`/`POS` encode the infinities.
    value_rank: Vec<i64>,
    /// Open image of each monotone piece as `(low, high)` ranks.
    images: Vec<(i64, i64)>,
}

const NEG: i64 = -1;
const POS: i64 = i64::MAX;

fn build_side(p: &UPoly, crit: Vec<(AlgebraicReal, AlgebraicReal)>, ranks: &[i64]) -> Side {
    let inf = |pos: bool| {
        if p.sign_at_infinity(pos) > 0 {
            POS
        } else {
            NEG
        }
    };
    let mut ends = vec![inf(false)];
    ends.extend_from_slice(ranks);
    ends.push(inf(true));
    let images = ends
        .windows(2)
        .map(|w| (w[0].min(w[1]), w[0].max(w[1])))
        .collect();
    Side {
        points: crit.into_iter().map(|(c, _)| c).collect(),
        value_rank: ranks.to_vec(),
        images,
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, i: usize) -> usize {
        let mut r = i;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut j = i;
        while self.0[j] != r {
            let nxt = self.0[j];
            self.0[j] = r;
            j = nxt;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn inside(r: i64, img: (i64, i64)) -> bool {
    img.0 < r && r < img.1
}

/// Exact component census of the real affine curve `g(x) = w h(s)`.
pub fn real_component_census(curve: &SeparatedCurve) -> Result<ComponentCensus, SurfaceError> {
    let phi = curve.phi();
    let psi = curve.psi();
    if phi.degree().unwrap_or(0) == 0 || psi.degree().unwrap_or(0) == 0 {
        return Err(SurfaceError::Internal(
            "both sides must be nonconstant".into(),
        ));
    }
    let cphi = critical_data(&phi);
    let cpsi = critical_data(&psi);
    let mut all: Vec<AlgebraicReal> = cphi
        .iter()
        .chain(cpsi.iter())
        .map(|(_, v)| v.clone())
        .collect();
    let ranks = rank_values(&mut all);
    let (rphi, rpsi) = ranks.split_at(cphi.len());
    if rphi.iter().any(|r| rpsi.contains(r)) {
        return Err(SurfaceError::SingularCurve);
    }
    let xs = build_side(&phi, cphi, rphi);
    let ss = build_side(&psi, cpsi.clone(), rpsi);
    let (ni, nj) = (xs.images.len(), ss.images.len());
    let id = |i: usize, j: usize| i * nj + j;

    let mut nonempty = vec![false; ni * nj];
    for i in 0..ni {
        for j in 0..nj {
            let (a, b) = (xs.images[i], ss.images[j]);
            nonempty[id(i, j)] = a.0.max(b.0) < a.1.min(b.1);
        }
    }
    let mut uf = UnionFind((0..ni * nj).collect());
    for j in 0..nj {
        for (i, &r) in xs.value_rank.iter().enumerate() {
            if inside(r, ss.images[j]) {
                uf.union(id(i, j), id(i + 1, j));
            }
        }
    }
    for i in 0..ni {
        for (j, &r) in ss.value_rank.iter().enumerate() {
            if inside(r, xs.images[i]) {
                uf.union(id(i, j), id(i, j + 1));
            }
        }
    }
    let mut roots: Vec<usize> = (0..ni * nj)
        .filter(|&p| nonempty[p])
        .map(|p| uf.find(p))
        .collect();
    roots.sort_unstable();
    roots.dedup();
    let count = roots.len();

    // Sweep: bands between vertical tangents and critical abscissae of g.
    let vertical = {
        let mut lifted: BiPoly = resultant::constant_coeffs(&psi)
            .iter()
            .map(|c| -c)
            .collect();
        lifted[0] = &lifted[0] + &phi;
        resultant::resultant(&lifted, &resultant::constant_coeffs(&psi.derivative()))
    };
    let boundary = (&vertical * &phi.derivative()).squarefree_part();
    let boxes = if boundary.degree().unwrap_or(0) == 0 {
        Vec::new()
    } else {
        isolate_real_roots(&boundary).expect("nonzero")
    };
    let bands: Vec<Rat> = (0..=boxes.len())
        .map(|b| {
            let lo = (b > 0).then(|| &boxes[b - 1].high);
            let hi = (b < boxes.len()).then(|| &boxes[b].low);
            simplest_in_closed(lo, hi)
        })
        .collect();
    let presence: Vec<Result<Vec<usize>, SurfaceError>> = bands
        .par_iter()
        .map(|x| {
            let mut pts = xs.points.clone();
            let i = pts
                .iter_mut()
                .map(|c| c.cmp_rat(x))
                .filter(|o| *o == Ordering::Less)
                .count();

            let v = phi.eval(x);
            let mut ords = Vec::with_capacity(cpsi.len());
            for (_, val) in cpsi.iter() {
                let mut val = val.clone();
                let o = val.cmp_rat(&v);
                if o == Ordering::Equal {
                    return Err(SurfaceError::Internal(format!(
                        "sample {} hits a critical value",
                        fmt_rat(x)
                    )));
                }
                ords.push(o);
            }
            // Position of v among the psi-ends of piece j.
            let below = |k: i64| match k {
                NEG => true,
                POS => false,
                _ => {
                    ords[rpsi
                        .iter()
                        .position(|r| *r == k)
                        .expect("rank of psi value")]
                        == Ordering::Less
                }
            };
            let above = |k: i64| match k {
                NEG => false,
                POS => true,
                _ => {
                    ords[rpsi
                        .iter()
                        .position(|r| *r == k)
                        .expect("rank of psi value")]
                        == Ordering::Greater
                }
            };
            let js: Vec<usize> = (0..nj)
                .filter(|&j| below(ss.images[j].0) && above(ss.images[j].1))
                .collect();
            let sturm = count_real_roots(&(&psi - &UPoly::constant(v.clone())));
            if sturm != js.len() {
                return Err(SurfaceError::Internal(format!(
                    "at x = {}: {} arcs but {} real roots",
                    fmt_rat(x),
                    js.len(),
                    sturm
                )));
            }
            Ok(js.into_iter().map(|j| id(i, j)).collect())
        })
        .collect();

    let mut ranges: Vec<Option<(usize, usize)>> = vec![None; count];
    for (b, pieces) in presence.into_iter().enumerate() {
        for p in pieces? {
            let comp = roots
                .binary_search(&uf.find(p))
                .expect("present piece is nonempty");
            let r = ranges[comp].get_or_insert((b, b));
            if r.1 + 1 < b {
                return Err(SurfaceError::Internal(
                    "component x-range is not contiguous".into(),
                ));
            }
            r.1 = b;
        }
    }
    let mut components = Vec::with_capacity(count);
    let mut ordered: Vec<(usize, usize)> = Vec::with_capacity(count);
    for r in ranges {
        ordered
            .push(r.ok_or_else(|| SurfaceError::Internal("component missed by the sweep".into()))?);
    }
    ordered.sort();
    for (first, last) in ordered {
        let low = if first == 0 {
            Bound::NegInf
        } else {
            Bound::root(&boxes[first - 1])
        };
        let high = if last == boxes.len() {
            Bound::PosInf
        } else {
            Bound::root(&boxes[last])
        };
        components.push(ComponentRange { low, high });
    }
    let bounded: Vec<&ComponentRange> = components.iter().filter(|c| c.is_bounded()).collect();
    let oval = (count == 2 && bounded.len() == 1).then(|| bounded[0].clone());
    Ok(ComponentCensus {
        curve: curve.to_json(),
        count,
        components,
        oval,
        boundary_poly: boundary.coeffs().iter().cloned().map(RatStr).collect(),
    })
}

/// Whether `x` lies in the closed x-interval of the oval.
pub fn oval_contains(census: &ComponentCensus, x: &Rat) -> Result<bool, SurfaceError> {
    if census.count != 2 {
        return Err(SurfaceError::NotTwoComponents(census.count));
    }
    let oval = census
        .oval
        .as_ref()
        .ok_or_else(|| SurfaceError::Internal("two components but no bounded one".into()))?;
    let p = census.boundary();
    let lo = oval.low.as_box().expect("bounded");
    let hi = oval.high.as_box().expect("bounded");
    let above_low = AlgebraicReal::from_box(&p, &lo).cmp_rat(x) != Ordering::Greater;
    let below_high = AlgebraicReal::from_box(&p, &hi).cmp_rat(x) != Ordering::Less;
    Ok(above_low && below_high)
}

/// For `g` with three real roots: whether `f(t1) y0^2` lies strictly between
/// the local extrema of `g`. Vacuously true otherwise.
pub fn assumption_bounds_check(g: &UPoly, f: &UPoly, t1: &Rat, y0: &Rat) -> bool {
    if count_real_roots(g) != 3 {
        return true;
    }
    let v = f.eval(t1) * y0 * y0;
    let shifted = g - &UPoly::constant(v);
    let dg = g.derivative().squarefree_part();
    let Ok(boxes) = isolate_real_roots(&dg) else {
        return false;
    };
    if boxes.len() != 2 {
        return false;
    }
    let signs: Vec<i8> = boxes
        .iter()
        .map(|b| AlgebraicReal::from_box(&dg, b).sign_of(&shifted))
        .collect();
    signs[0] * signs[1] < 0
}

/// Rational approximations of the real points above `x`, for plotting.
pub fn real_points_at(curve: &SeparatedCurve, x: &Rat, width: &Rat) -> Vec<Rat> {
    let p = &curve.psi() - &UPoly::constant(curve.g.eval(x));
    curve
        .fiber_over(x)
        .into_iter()
        .map(|b| {
            let r = crate::exact::sturm::refine_box(&p, &b, width);
            (&r.low + &r.high) / Rat::from_integer(2.into())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::{int, rat};

    fn curve(g: &[i64], w: Rat, h: &[i64]) -> SeparatedCurve {
        SeparatedCurve {
            g: UPoly::from_ints(g),
            w,
            h: UPoly::from_ints(h),
        }
    }

    #[test]
    fn one_real_root_fiber() {
        let c = curve(&[1, 1, 0, 1], int(3), &[0, 0, 1]);
        let census = real_component_census(&c).unwrap();
        assert_eq!(census.count, 1);
        assert!(census.oval.is_none());
    }

    #[test]
    fn two_components_with_oval() {
        let c = curve(&[0, -4, 0, 1], int(1), &[0, 0, 1]);
        let census = real_component_census(&c).unwrap();
        assert_eq!(census.count, 2);
        assert!(oval_contains(&census, &int(-1)).unwrap());
        assert!(!oval_contains(&census, &int(1)).unwrap());
        assert!(oval_contains(&census, &int(-2)).unwrap());
        assert!(oval_contains(&census, &int(0)).unwrap());
        assert!(!oval_contains(&census, &rat(-2001, 1000)).unwrap());
        assert!(!oval_contains(&census, &rat(1, 1000)).unwrap());
    }

    #[test]
    fn negative_twist_moves_the_oval() {
        let c = curve(&[0, -4, 0, 1], int(-5), &[0, 0, 1]);
        let census = real_component_census(&c).unwrap();
        assert_eq!(census.count, 2);
        assert!(oval_contains(&census, &int(1)).unwrap());
        assert!(!oval_contains(&census, &int(-1)).unwrap());
    }

    #[test]
    fn kummer_y_fiber_is_connected() {
        let c = curve(&[1, 1, 0, 1], int(1), &[3, 2, 0, 1]);
        assert_eq!(real_component_census(&c).unwrap().count, 1);
    }

    #[test]
    fn singular_curve_rejected() {
        // x^2 = s^2 is a node at the origin
        let c = curve(&[0, 0, 1], int(1), &[0, 0, 1]);
        assert!(matches!(
            real_component_census(&c),
            Err(SurfaceError::SingularCurve)
        ));
    }

    #[test]
    fn ellipse_is_one_oval() {
        // x^2 + s^2 = 1 written as 1 - x^2 = s^2
        let c = curve(&[1, 0, -1], int(1), &[0, 0, 1]);
        let census = real_component_census(&c).unwrap();
        assert_eq!(census.count, 1);
        assert!(census.components[0].is_bounded());
    }

    #[test]
    fn bounds_check_examples() {
        let g = UPoly::from_ints(&[0, -4, 0, 1]);
        let f = UPoly::from_ints(&[1, 0, 0, 0, 1]);
        assert!(assumption_bounds_check(&g, &f, &int(0), &int(1)));
        assert!(!assumption_bounds_check(&g, &f, &int(0), &int(2)));
        let g1 = UPoly::from_ints(&[1, 1, 0, 1]);
        assert!(assumption_bounds_check(&g1, &f, &int(0), &int(100)));
    }
}
