//! Density witnesses: rational parameters near a target whose fiber
//! carries a certified point of infinite order.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cubic::{
    chord_torsion_test, ChordTorsionVerdict, ChordWalker, CubicError, PlaneCubic, ProjPoint,
};
use crate::elliptic::{
    to_integral_model, torsion_test, ECPoint, EllipticError, TorsionVerdict, WeierstrassCurve,
};
use crate::exact::rat::{fmt_rat, height_bits, pow, Rat, RatStr};
use crate::exact::sturm::{count_real_roots, isolate_real_roots};
use crate::family::{Coeffs, FamilyError, ParamFamily, Variant};
use crate::surface::{
    assumption_bounds_check, oval_contains, real_component_census, QuotientSurface, SurfaceError,
    SurfaceJson, TwistPencil,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DensityError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
    #[error(transparent)]
    Cubic(#[from] CubicError),
    #[error("half-intervals exist only for the quartic and sextic families")]
    Unsupported,
    #[error("family {family} does not match a degree-{deg} pencil")]
    FamilyMismatch { family: String, deg: u32 },
    #[error("target {0} is not inside the half-interval")]
    OutsideHalfInterval(String),
    #[error("epsilon must be positive")]
    BadEpsilon,
    #[error("seed is not on the surface")]
    SeedNotOnSurface,
    #[error("seed has y = 0, which is 2-torsion in its fiber")]
    SeedOnZeroSection,
    #[error("seed is torsion in its fiber ({0:?}); choose a better seed")]
    SeedTorsion(TorsionVerdict),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
}

/// Open interval with `None` for an infinite end.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfInterval {
    pub low: Option<RatStr>,
    pub high: Option<RatStr>,
}

impl HalfInterval {
    pub fn contains(&self, t: &Rat) -> bool {
        self.low.as_ref().is_none_or(|l| &l.0 < t) && self.high.as_ref().is_none_or(|h| t < &h.0)
    }
}

/// `t(u) = tau0 + K / u^m`.
struct Binomial {
    tau0: Rat,
    k: Rat,
    m: u32,
}

fn binomial(f: &ParamFamily, c: &Coeffs) -> Result<Binomial, DensityError> {
    f.check_coeffs(c)?;
    let (a, b, cc, d) = (&c.a.0, &c.b.0, &c.c.0, &c.d.0);
    let tau0 = -d / cc;
    match f.variant {
        Variant::Quartic1728 => Ok(Binomial {
            tau0,
            k: pow(cc, 3) * a,
            m: 4,
        }),
        Variant::Sextic0 => Ok(Binomial {
            tau0,
            k: pow(b, 7) / cc,
            m: 6,
        }),
        Variant::General { .. } => Err(DensityError::Unsupported),
    }
}

/// Image of `u -> t(u)`: `(-d/c, oo)` when the coefficient of `u^-m` is positive.
pub fn half_interval(f: &ParamFamily, c: &Coeffs) -> Result<HalfInterval, DensityError> {
    let bi = binomial(f, c)?;
    let end = Some(RatStr(bi.tau0));
    Ok(if bi.k.is_positive() {
        HalfInterval {
            low: end,
            high: None,
        }
    } else {
        HalfInterval {
            low: None,
            high: end,
        }
    })
}

/// Stern–Brocot search for the simplest positive rational with `pred(u) == Equal`,
/// where `pred` is `Less` below and `Greater` above an open interval.
fn simplest_positive(pred: &dyn Fn(&Rat) -> Ordering, budget: &mut u64) -> Option<Rat> {
    let (mut a, mut b) = (BigInt::zero(), BigInt::one());
    let (mut c, mut d) = (BigInt::one(), BigInt::zero());
    let mk = |n: &BigInt, m: &BigInt| Rat::new(n.clone(), m.clone());
    loop {
        let spend = |budget: &mut u64| {
            if *budget == 0 {
                return false;
            }
            *budget -= 1;
            true
        };
        if !spend(budget) {
            return None;
        }
        let m = mk(&(&a + &c), &(&b + &d));
        match pred(&m) {
            Ordering::Equal => return Some(m),
            Ordering::Less => {
                // largest k with (a + k c)/(b + k d) still below
                let at = |k: &BigInt| mk(&(&a + k * &c), &(&b + k * &d));
                let k = gallop(&|k| pred(&at(k)) == Ordering::Less, budget)?;
                let (na, nb) = (&a + &k * &c, &b + &k * &d);
                a = na;
                b = nb;
            }
            Ordering::Greater => {
                let at = |k: &BigInt| mk(&(&c + k * &a), &(&d + k * &b));
                let k = gallop(&|k| pred(&at(k)) == Ordering::Greater, budget)?;
                let (nc, nd) = (&c + &k * &a, &d + &k * &b);
                c = nc;
                d = nd;
            }
        }
    }
}

/// Largest `k >= 1` with `ok(k)`, given `ok(1)`; exponential then binary search.
fn gallop(ok: &dyn Fn(&BigInt) -> bool, budget: &mut u64) -> Option<BigInt> {
    let mut lo = BigInt::one();
    let mut hi = BigInt::from(2);
    loop {
        if *budget == 0 {
            return None;
        }
        *budget -= 1;
        if !ok(&hi) {
            break;
        }
        lo = hi.clone();
        hi *= 2;
    }
    while &hi - &lo > BigInt::one() {
        if *budget == 0 {
            return None;
        }
        *budget -= 1;
        let mid: BigInt = (&lo + &hi) / 2;
        if ok(&mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

fn simpler(a: &Rat, b: &Rat) -> bool {
    let ka = (a.denom().clone(), a.numer().abs(), a.is_negative());
    let kb = (b.denom().clone(), b.numer().abs(), b.is_negative());
    ka < kb
}

/// Default Stern–Brocot budget per search.
pub const DEFAULT_SEARCH_STEPS: u64 = 20_000;

/// Simplest `u` with `|t(u) - t1| < eps`, avoiding `excluded`.
pub fn approximate_u_for_t(
    f: &ParamFamily,
    c: &Coeffs,
    t1: &Rat,
    eps: &Rat,
) -> Result<Rat, DensityError> {
    let mut budget = DEFAULT_SEARCH_STEPS;
    approximate_u_excluding(f, c, t1, eps, &[], &mut budget)
}

pub fn approximate_u_excluding(
    f: &ParamFamily,
    c: &Coeffs,
    t1: &Rat,
    eps: &Rat,
    excluded: &[Rat],
    budget: &mut u64,
) -> Result<Rat, DensityError> {
    if !eps.is_positive() {
        return Err(DensityError::BadEpsilon);
    }
    let hi = half_interval(f, c)?;
    if !hi.contains(t1) {
        return Err(DensityError::OutsideHalfInterval(fmt_rat(t1)));
    }
    let bi = binomial(f, c)?;
    // s = t - tau0 ranges over an interval of one sign; u^m = K / s.
    let s_lo = t1 - eps - &bi.tau0;
    let s_hi = t1 + eps - &bi.tau0;
    let (v_lo, v_hi): (Rat, Option<Rat>) = if bi.k.is_positive() {
        let v_lo = &bi.k / &s_hi;
        let v_hi = s_lo.is_positive().then(|| &bi.k / &s_lo);
        (v_lo, v_hi)
    } else {
        let v_lo = &bi.k / &s_lo;
        let v_hi = s_hi.is_negative().then(|| &bi.k / &s_hi);
        (v_lo, v_hi)
    };
    let m = bi.m;
    let mut excluded = excluded.to_vec();
    excluded.extend(crossing_points(f, c));
    let mut cuts: Vec<Rat> = excluded
        .iter()
        .filter(|e| e.is_positive())
        .cloned()
        .collect();
    let mut neg_cuts: Vec<Rat> = excluded
        .iter()
        .filter(|e| e.is_negative())
        .map(|e| -e)
        .collect();
    cuts.sort();
    cuts.dedup();
    neg_cuts.sort();
    neg_cuts.dedup();
    let mut best: Option<Rat> = None;
    for (sign, cuts) in [(1i32, &cuts), (-1, &neg_cuts)] {
        // pieces between consecutive cut points, in |u|
        let mut bounds: Vec<Option<Rat>> = vec![None];
        bounds.extend(cuts.iter().cloned().map(Some));
        bounds.push(None);
        for w in bounds.windows(2) {
            let (lo_cut, hi_cut) = (&w[0], &w[1]);
            let pred = |u: &Rat| -> Ordering {
                let um = pow(u, m);
                if um <= v_lo || lo_cut.as_ref().is_some_and(|l| u <= l) {
                    return Ordering::Less;
                }
                if v_hi.as_ref().is_some_and(|h| &um >= h)
                    || hi_cut.as_ref().is_some_and(|h| u >= h)
                {
                    return Ordering::Greater;
                }
                Ordering::Equal
            };
            // skip pieces disjoint from the target interval
            if let (Some(l), Some(h)) = (lo_cut, hi_cut) {
                if l >= h {
                    continue;
                }
            }
            if let Some(h) = hi_cut {
                if pow(h, m) <= v_lo {
                    continue;
                }
            }
            if let (Some(l), Some(vh)) = (lo_cut, &v_hi) {
                if &pow(l, m) >= vh {
                    continue;
                }
            }
            let Some(u) = simplest_positive(&pred, budget) else {
                return Err(DensityError::CapExceeded(
                    "Stern–Brocot search budget exhausted".into(),
                ));
            };
            let u = if sign < 0 { -u } else { u };
            if best.as_ref().is_none_or(|b| simpler(&u, b)) {
                best = Some(u);
            }
        }
    }
    best.ok_or_else(|| DensityError::CapExceeded("every candidate u is excluded".into()))
}

/// Rational `u` with `y(u) = 0`: for the quartic family `u^4 = a c^4 / d`.
fn crossing_points(f: &ParamFamily, c: &Coeffs) -> Vec<Rat> {
    if f.variant != Variant::Quartic1728 {
        return Vec::new();
    }
    let r = &c.a.0 * pow(&c.c.0, 4) / &c.d.0;
    match exact_root(&r, 4) {
        Some(u) if !u.is_zero() => vec![u.clone(), -u],
        _ => Vec::new(),
    }
}

/// Non-negative rational `n`-th root, when it exists.
fn exact_root(q: &Rat, n: u32) -> Option<Rat> {
    if q.is_negative() {
        return None;
    }
    let (a, b) = (q.numer().nth_root(n), q.denom().nth_root(n));
    (a.pow(n) == *q.numer() && b.pow(n) == *q.denom()).then(|| Rat::new(a, b))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilCaps {
    /// New `u` tried after a torsion or degenerate candidate.
    pub retries: u32,
    /// Total Stern–Brocot probes.
    pub search_steps: u64,
}

impl Default for PencilCaps {
    fn default() -> Self {
        PencilCaps {
            retries: 16,
            search_steps: DEFAULT_SEARCH_STEPS,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KummerCaps {
    pub multiples: u32,
    pub chord_steps: u32,
    pub cert_retries: u32,
    /// Walk stops once a point needs more bits than this.
    pub max_height_bits: u64,
}

impl Default for KummerCaps {
    fn default() -> Self {
        KummerCaps {
            multiples: 64,
            chord_steps: 200,
            cert_retries: 16,
            max_height_bits: 1 << 15,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    Pencil,
    Kummer,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilJson {
    pub curve: WeierstrassCurve,
    pub deg: u32,
    pub c: RatStr,
    pub d: RatStr,
}

impl PencilJson {
    pub fn from_pencil(p: &TwistPencil) -> Self {
        PencilJson {
            curve: p.curve.clone(),
            deg: p.deg,
            c: RatStr(p.c.clone()),
            d: RatStr(p.d.clone()),
        }
    }

    pub fn to_pencil(&self) -> Result<TwistPencil, SurfaceError> {
        TwistPencil::new(
            self.curve.clone(),
            self.deg,
            self.c.0.clone(),
            self.d.0.clone(),
        )
    }
}

/// Provenance of a Kummer witness along the chord walk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KummerTrail {
    pub seed: (RatStr, RatStr, RatStr),
    pub seed_certificate: TorsionVerdict,
    /// The walk starts from this multiple of the seed in its t-fiber.
    pub multiple: u32,
    /// `(x, y, t)` of the walk's base point.
    pub base_point: (RatStr, RatStr, RatStr),
    pub chord_certificate: ChordTorsionVerdict,
    /// Index `n` of the hit `Q_n = (3n+1) P`.
    pub step: i64,
    pub three_root_case: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityWitness {
    pub kind: WitnessKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pencil: Option<PencilJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<Variant>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface: Option<SurfaceJson>,
    pub t1: RatStr,
    pub epsilon: RatStr,
    pub t_prime: RatStr,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<RatStr>,
    /// `(x, y, t')` on the total space.
    pub point: (RatStr, RatStr, RatStr),
    /// Integral model of the fiber at `t'` and the transported point.
    pub fiber_curve: WeierstrassCurve,
    pub fiber_point: ECPoint,
    pub certificate: TorsionVerdict,
    pub error: RatStr,
    /// `f` has no real roots of odd multiplicity.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_nonnegative: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kummer: Option<KummerTrail>,
}

/// Outcome of a capped search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status")]
pub enum DensityOutcome {
    #[serde(rename = "WITNESS")]
    Witness(Box<DensityWitness>),
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive { reason: String },
}

fn pencil_coeffs(p: &TwistPencil, f: &ParamFamily) -> Result<Coeffs, DensityError> {
    let mismatch = || DensityError::FamilyMismatch {
        family: f.variant.to_string(),
        deg: p.deg,
    };
    match (f.variant, p.deg) {
        (Variant::Quartic1728, 4) => Ok(Coeffs::new(
            p.curve.a().clone(),
            Rat::zero(),
            p.c.clone(),
            p.d.clone(),
        )),
        (Variant::Sextic0, 6) => Ok(Coeffs::new(
            Rat::zero(),
            p.curve.b().clone(),
            p.c.clone(),
            p.d.clone(),
        )),
        _ => Err(mismatch()),
    }
}

/// `f` is non-negative on the reals: every real root has even multiplicity.
pub fn nonnegative_everywhere(f: &crate::exact::upoly::UPoly) -> bool {
    if f.lc().is_negative() {
        return false;
    }
    match isolate_real_roots(f) {
        Ok(boxes) => boxes.iter().all(|b| {
            // multiplicity parity via the squarefree decomposition
            let g = f.gcd(&f.derivative());
            let mut m = 1;
            let mut h = g;
            while h.degree().unwrap_or(0) > 0
                && crate::exact::sturm::SturmChain::new(&h.squarefree_part())
                    .count_in(&b.low, &b.high)
                    > 0
            {
                m += 1;
                h = h.gcd(&h.derivative());
            }
            m % 2 == 0
        }),
        Err(_) => true,
    }
}

/// Fiber at `t` as an integral model with the transported point.
fn certify_fiber(
    e: &WeierstrassCurve,
    f_at_t: &Rat,
    x: &Rat,
    y: &Rat,
) -> Result<(WeierstrassCurve, ECPoint, TorsionVerdict), DensityError> {
    let (tw, map) = crate::elliptic::quadratic_twist(e, f_at_t)?;
    let p = map.forward(x, y);
    let (model, pt, _) = to_integral_model(&tw, &p);
    let verdict = torsion_test(&model, &pt)?;
    Ok((model, pt, verdict))
}

pub fn pencil_density_witness(
    p: &TwistPencil,
    f: &ParamFamily,
    t1: &Rat,
    eps: &Rat,
    caps: PencilCaps,
) -> Result<DensityWitness, DensityError> {
    let co = pencil_coeffs(p, f)?;
    let fpoly = p.f();
    let mut excluded: Vec<Rat> = Vec::new();
    let mut budget = caps.search_steps;
    for _ in 0..=caps.retries {
        let u = approximate_u_excluding(f, &co, t1, eps, &excluded, &mut budget)?;
        let (x, y, t) = match f.eval(&co, &u) {
            Ok(v) => v,
            Err(FamilyError::Pole(_)) => {
                excluded.push(u);
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let ft = fpoly.eval(&t);
        if ft.is_zero() || y.is_zero() {
            excluded.push(u);
            continue;
        }
        let (model, pt, verdict) = certify_fiber(&p.curve, &ft, &x, &y)?;
        if verdict.is_torsion() {
            log::info!("u = {} gives a torsion point; retrying", fmt_rat(&u));
            excluded.push(u);
            continue;
        }
        let error = (&t - t1).abs();
        return Ok(DensityWitness {
            kind: WitnessKind::Pencil,
            pencil: Some(PencilJson::from_pencil(p)),
            family: Some(f.variant),
            surface: None,
            t1: RatStr(t1.clone()),
            epsilon: RatStr(eps.clone()),
            t_prime: RatStr(t.clone()),
            u: Some(RatStr(u)),
            point: (RatStr(x), RatStr(y), RatStr(t)),
            fiber_curve: model,
            fiber_point: pt,
            certificate: verdict,
            error: RatStr(error),
            f_nonnegative: Some(nonnegative_everywhere(&fpoly)),
            kummer: None,
        });
    }
    Err(DensityError::CapExceeded(format!(
        "{} retries used",
        caps.retries
    )))
}

struct Hit {
    step: i64,
    x: Rat,
    t: Rat,
    model: WeierstrassCurve,
    pt: ECPoint,
    verdict: TorsionVerdict,
}

pub fn kummer_density_witness(
    k: &QuotientSurface,
    seed: (&Rat, &Rat, &Rat),
    t1: &Rat,
    eps: &Rat,
    caps: KummerCaps,
) -> Result<DensityOutcome, DensityError> {
    if !eps.is_positive() {
        return Err(DensityError::BadEpsilon);
    }
    let (x0, y0, t0) = seed;
    let e1 = k.e1()?;
    if !k.contains(x0, y0, t0) {
        return Err(DensityError::SeedNotOnSurface);
    }
    if y0.is_zero() {
        return Err(DensityError::SeedOnZeroSection);
    }
    let g = k.g();
    let fpoly = k.f();
    let q0 = fpoly.eval(t0);
    let (et0, map0) = k.fiber_t(t0)?;
    let p0 = map0.forward(x0, y0);
    let seed_verdict = torsion_test(&et0, &p0)?;
    if seed_verdict.is_torsion() {
        return Err(DensityError::SeedTorsion(seed_verdict));
    }
    let three_roots = count_real_roots(&g) == 3;

    let mut pm = ECPoint::Infinity;
    let mut retries_left = caps.cert_retries;
    for m in 1..=caps.multiples {
        pm = et0.add_unchecked(&pm, &p0);
        let Some((x, y)) = map0.backward(&pm) else {
            continue;
        };
        if y.is_zero() {
            continue;
        }
        let connected = real_component_census(&k.fiber_y_separated(&y)?)
            .map(|c| c.count == 1)
            .unwrap_or(false);
        if !connected || !assumption_bounds_check(&g, &fpoly, t1, &y) {
            continue;
        }
        let cubic = k.fiber_y(&y)?;
        if !cubic.is_smooth() {
            continue;
        }
        let base = ProjPoint::affine(x.clone(), t0.clone());
        let chord_verdict = chord_torsion_test(&cubic, &base)?;
        if !chord_verdict.is_non_torsion() {
            continue;
        }
        log::info!("walking from multiple {m} on the fiber y = {}", fmt_rat(&y));
        match walk(k, &e1, &cubic, &base, t1, eps, three_roots, caps, &mut retries_left)? {
            Some(hit) => {
                let error = (&hit.t - t1).abs();
                return Ok(DensityOutcome::Witness(Box::new(DensityWitness {
                    kind: WitnessKind::Kummer,
                    pencil: None,
                    family: None,
                    surface: Some(k.to_json()),
                    t1: RatStr(t1.clone()),
                    epsilon: RatStr(eps.clone()),
                    t_prime: RatStr(hit.t.clone()),
                    u: None,
                    point: (RatStr(hit.x), RatStr(y.clone()), RatStr(hit.t)),
                    fiber_curve: hit.model,
                    fiber_point: hit.pt,
                    certificate: hit.verdict,
                    error: RatStr(error),
                    f_nonnegative: None,
                    kummer: Some(KummerTrail {
                        seed: (RatStr(x0.clone()), RatStr(y0.clone()), RatStr(t0.clone())),
                        seed_certificate: seed_verdict,
                        multiple: m,
                        base_point: (RatStr(x), RatStr(y), RatStr(t0.clone())),
                        chord_certificate: chord_verdict,
                        step: hit.step,
                        three_root_case: three_roots,
                    }),
                })));
            }
            None => {
                return Ok(DensityOutcome::Inconclusive {
                    reason: format!(
                        "no certified hit within {} chord steps, {} certification retries or {} bits of height (q0 = {})",
                        caps.chord_steps,
                        caps.cert_retries,
                        caps.max_height_bits,
                        fmt_rat(&q0)
                    ),
                })
            }
        }
    }
    Ok(DensityOutcome::Inconclusive {
        reason: format!(
            "no multiple up to {} satisfies both assumptions with a non-torsion class",
            caps.multiples
        ),
    })
}

fn point_height(x: &Rat, t: &Rat) -> u64 {
    height_bits(x).max(height_bits(t))
}

#[allow(clippy::too_many_arguments)]
fn walk(
    k: &QuotientSurface,
    e1: &WeierstrassCurve,
    cubic: &PlaneCubic,
    base: &ProjPoint,
    t1: &Rat,
    eps: &Rat,
    three_roots: bool,
    caps: KummerCaps,
    retries_left: &mut u32,
) -> Result<Option<Hit>, DensityError> {
    let walker = ChordWalker::new(cubic, base)?;
    let fpoly = k.f();
    let (mut fwd, mut bwd) = (base.clone(), base.clone());
    let mut found: Vec<Hit> = Vec::new();
    let mut steps = 0;
    let mut level = 0i64;
    while steps < caps.chord_steps {
        level += 1;
        for dir in [1i64, -1] {
            if steps >= caps.chord_steps {
                break;
            }
            steps += 1;
            let q = if dir > 0 {
                walker.next(&fwd)?
            } else {
                walker.prev(&bwd)?
            };
            if dir > 0 {
                fwd = q.clone();
            } else {
                bwd = q.clone();
            }
            if q.height_bits() > caps.max_height_bits {
                log::info!("height cap reached at step {}", dir * level);
                return Ok(best(found));
            }
            let Some((x, t)) = q.dehomogenize() else {
                continue;
            };
            if (&t - t1).abs() >= *eps {
                continue;
            }
            let ft = fpoly.eval(&t);
            if ft.is_zero() {
                continue;
            }
            let y = &base_y(cubic);
            let (model, pt, verdict) = certify_fiber(e1, &ft, &x, y)?;
            let on_oval = !three_roots
                || real_component_census(&k.fiber_t_separated(&t)?)
                    .ok()
                    .and_then(|c| oval_contains(&c, &x).ok())
                    .unwrap_or(false);
            if verdict.is_torsion() || !on_oval {
                if *retries_left == 0 {
                    return Ok(best(found));
                }
                *retries_left -= 1;
                continue;
            }
            found.push(Hit {
                step: dir * level,
                x,
                t,
                model,
                pt,
                verdict,
            });
        }
        if !found.is_empty() {
            return Ok(best(found));
        }
    }
    Ok(best(found))
}

/// The y-value of a fiber cubic `X^3 + ... - y^2 Y^3 ...`.
fn base_y(cubic: &PlaneCubic) -> Rat {
    // coefficient of Y^3 is -y^2; the sign of y is irrelevant on the fiber
    let w = -cubic.coeffs()[6].clone();
    exact_root(&w, 2).expect("fiber cubics carry a rational square")
}

fn best(mut found: Vec<Hit>) -> Option<Hit> {
    found.sort_by_key(|h| (point_height(&h.x, &h.t), h.step.unsigned_abs(), h.step < 0));
    found.into_iter().next()
}

/// Re-checks every claim of a witness.
pub fn verify_witness(w: &DensityWitness) -> Result<(), String> {
    let (x, y, t) = (&w.point.0 .0, &w.point.1 .0, &w.point.2 .0);
    if t != &w.t_prime.0 {
        return Err("point t differs from t_prime".into());
    }
    let err = (t - &w.t1.0).abs();
    if err != w.error.0 {
        return Err("recorded error is wrong".into());
    }
    if err >= w.epsilon.0 {
        return Err("|t' - t1| is not below epsilon".into());
    }
    let (e, fpoly) = match w.kind {
        WitnessKind::Pencil => {
            let pj = w.pencil.as_ref().ok_or("pencil witness without pencil")?;
            let p = pj.to_pencil().map_err(|e| e.to_string())?;
            let fam = ParamFamily::build(w.family.ok_or("pencil witness without family")?)
                .map_err(|e| e.to_string())?;
            let co = pencil_coeffs(&p, &fam).map_err(|e| e.to_string())?;
            let u = &w.u.as_ref().ok_or("pencil witness without u")?.0;
            let (ex, ey, et) = fam.eval(&co, u).map_err(|e| e.to_string())?;
            if (&ex, &ey, &et) != (x, y, t) {
                return Err("point is not the parametrization at u".into());
            }
            if w.f_nonnegative != Some(nonnegative_everywhere(&p.f())) {
                return Err("non-negativity flag is wrong".into());
            }
            (p.curve.clone(), p.f())
        }
        WitnessKind::Kummer => {
            let sj = w.surface.as_ref().ok_or("kummer witness without surface")?;
            let s = QuotientSurface::from_json(sj).map_err(|e| e.to_string())?;
            if !s.contains(x, y, t) {
                return Err("point is not on the surface".into());
            }
            let trail = w.kummer.as_ref().ok_or("kummer witness without trail")?;
            let (bx, by, bt) = (
                &trail.base_point.0 .0,
                &trail.base_point.1 .0,
                &trail.base_point.2 .0,
            );
            if by != y || !s.contains(bx, by, bt) {
                return Err("base point and hit are not on one y-fiber".into());
            }
            let cubic = s.fiber_y(by).map_err(|e| e.to_string())?;
            let again = chord_torsion_test(&cubic, &ProjPoint::affine(bx.clone(), bt.clone()))
                .map_err(|e| e.to_string())?;
            if again != trail.chord_certificate || !again.is_non_torsion() {
                return Err("chord certificate does not reproduce".into());
            }
            let (sx, sy, st) = (&trail.seed.0 .0, &trail.seed.1 .0, &trail.seed.2 .0);
            let (et0, map0) = s.fiber_t(st).map_err(|e| e.to_string())?;
            let sv = torsion_test(&et0, &map0.forward(sx, sy)).map_err(|e| e.to_string())?;
            if sv != trail.seed_certificate || sv.is_torsion() {
                return Err("seed certificate does not reproduce".into());
            }
            if trail.three_root_case {
                let census =
                    real_component_census(&s.fiber_t_separated(t).map_err(|e| e.to_string())?)
                        .map_err(|e| e.to_string())?;
                if !oval_contains(&census, x).map_err(|e| e.to_string())? {
                    return Err("point is not on the oval".into());
                }
            }
            (s.e1().map_err(|e| e.to_string())?, s.f())
        }
    };
    let ft = fpoly.eval(t);
    if ft.is_zero() {
        return Err("degenerate fiber".into());
    }
    if fpoly.eval(t) * y * y != e.rhs(x) {
        return Err("point is not on its fiber".into());
    }
    let (model, pt, verdict) = certify_fiber(&e, &ft, x, y).map_err(|e| e.to_string())?;
    if model != w.fiber_curve || pt != w.fiber_point {
        return Err("fiber model or transported point differs".into());
    }
    if verdict != w.certificate || verdict.is_torsion() {
        return Err("torsion certificate does not reproduce".into());
    }
    Ok(())
}
