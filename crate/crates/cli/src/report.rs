//! One document type per subcommand. Each document carries its own inputs,
//! so `verify` rebuilds it from those inputs and demands equality.

use std::fmt;
use std::io::Read;

use anyhow::{anyhow, bail, Context, Result};
use kf_core::density::{KummerCaps, PencilCaps, WitnessKind};
use kf_core::exact::rat::{int, pow};
use kf_core::family::IdentityReport;
use kf_core::surface::census::SeparatedCurveJson;
use kf_core::surface::SurfaceJson;
use kf_core::twist::TwistSearch;
use kf_core::{
    build_family, chord_torsion_test, kummer_density_witness, pencil_density_witness,
    real_component_census, simultaneous_twists, torsion_test, twist_class_of_u, verify_witness,
    ChordTorsionVerdict, Coeffs, ComponentCensus, DensityError, DensityOutcome, ECPoint,
    PlaneCubic, ProjPoint, QuotientSurface, Rat, RatStr, SeparatedCurve, TorsionVerdict,
    TwistPencil, UPoly, Variant, WeierstrassCurve,
};
use num_traits::Zero;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::args::{
    BadArg, CensusArgs, ChordArgs, Command, ContainsArgs, EvalArgs, FamilyArgs, FiberArgs,
    FiberSel, KummerArgs, PencilArgs, TorsionArgs, TwistArgs,
};
use crate::{plot, to_json, write_atomic, Emit};

/// A document that failed re-verification.
#[derive(Debug)]
pub struct VerifyFailure(pub String);

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "verification failed: {}", self.0)
    }
}

impl std::error::Error for VerifyFailure {}

fn fail(msg: impl Into<String>) -> anyhow::Error {
    VerifyFailure(msg.into()).into()
}

type Triple = (RatStr, RatStr, RatStr);

fn triple(v: &[Rat; 3]) -> Triple {
    (
        RatStr(v[0].clone()),
        RatStr(v[1].clone()),
        RatStr(v[2].clone()),
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentitiesDoc {
    pub command: String,
    pub variant: Variant,
    pub x: String,
    pub y: String,
    pub t: String,
    pub curve_residual: String,
    pub surface_residual: String,
    pub verified: bool,
}

fn identities(v: Variant) -> Result<IdentitiesDoc> {
    let f = build_family(v)?;
    let IdentityReport {
        curve_residual,
        surface_residual,
    } = f.identity_report();
    Ok(IdentitiesDoc {
        command: "verify-identities".into(),
        variant: v,
        x: f.x.to_string(),
        y: f.y.to_string(),
        t: f.t.to_string(),
        verified: curve_residual.is_zero() && surface_residual.is_zero(),
        curve_residual: curve_residual.to_string(),
        surface_residual: surface_residual.to_string(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalDoc {
    pub command: String,
    pub variant: Variant,
    pub coeffs: Coeffs,
    pub u: RatStr,
    /// `(x, y, t)`.
    pub point: Triple,
    pub curve_holds: bool,
    pub surface_holds: bool,
}

fn eval_param(v: Variant, co: &Coeffs, u: &Rat) -> Result<EvalDoc> {
    let f = build_family(v)?;
    let (x, y, t) = f.eval(co, u)?;
    Ok(EvalDoc {
        command: "eval-param".into(),
        variant: v,
        coeffs: co.clone(),
        u: RatStr(u.clone()),
        curve_holds: f.curve_holds(co, &x, &y, &t),
        surface_holds: f.surface_holds(co, &x, &y, &t),
        point: (RatStr(x), RatStr(y), RatStr(t)),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContainsDoc {
    pub command: String,
    pub surface: SurfaceJson,
    pub point: Triple,
    /// `f(t) y^k`.
    pub lhs: RatStr,
    /// `g(x)`.
    pub rhs: RatStr,
    pub contains: bool,
}

fn contains(s: &QuotientSurface, p: &[Rat; 3]) -> ContainsDoc {
    let lhs = s.f().eval(&p[2]) * pow(&p[1], s.k);
    let rhs = s.g().eval(&p[0]);
    ContainsDoc {
        command: "surface-contains".into(),
        surface: s.to_json(),
        point: triple(p),
        contains: lhs == rhs,
        lhs: RatStr(lhs),
        rhs: RatStr(rhs),
    }
}

/// Which fiber of the surface.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fiber {
    T(RatStr),
    Y(RatStr),
}

impl Fiber {
    fn from_sel(sel: &FiberSel) -> Result<Fiber> {
        match (&sel.t, &sel.y) {
            (Some(t), None) => Ok(Fiber::T(RatStr(t.clone()))),
            (None, Some(y)) => Ok(Fiber::Y(RatStr(y.clone()))),
            _ => Err(BadArg("give exactly one of --t and --y".into()).into()),
        }
    }

    /// The fiber as `g(x) = w h(s)`, valid for every `k` and `n`.
    fn separated(&self, s: &QuotientSurface) -> Result<SeparatedCurve> {
        match self {
            Fiber::T(t) => {
                let w = s.f().eval(&t.0);
                if w.is_zero() {
                    bail!("degenerate fiber: f({t}) = 0");
                }
                Ok(SeparatedCurve {
                    g: s.g(),
                    w,
                    h: UPoly::monomial(int(1), s.k as usize),
                })
            }
            Fiber::Y(y) => {
                if y.0.is_zero() {
                    bail!("y0 must be nonzero");
                }
                Ok(SeparatedCurve {
                    g: s.g(),
                    w: pow(&y.0, s.k),
                    h: s.f(),
                })
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberDoc {
    pub command: String,
    pub surface: SurfaceJson,
    pub fiber: Fiber,
    /// `g(x) = w h(s)`.
    pub separated: SeparatedCurveJson,
    /// Over `t = t0`: the twist `Y^2 = X^3 + w^2 a X + w^3 b` with `w = f(t0)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weierstrass: Option<WeierstrassCurve>,
    /// Over `y = y0`: the projective cubic in `(x : t : z)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cubic: Option<PlaneCubic>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smooth: Option<bool>,
}

fn fiber(s: &QuotientSurface, which: Fiber) -> Result<FiberDoc> {
    let separated = which.separated(s)?.to_json();
    let kummer = s.k == 2 && s.n == 3;
    let (weierstrass, cubic) = match (&which, kummer) {
        (Fiber::T(t), true) => (Some(s.fiber_t(&t.0)?.0), None),
        (Fiber::Y(y), true) => (None, Some(s.fiber_y(&y.0)?)),
        _ => (None, None),
    };
    let smooth = cubic.as_ref().map(PlaneCubic::is_smooth);
    Ok(FiberDoc {
        command: "fiber".into(),
        surface: s.to_json(),
        fiber: which,
        separated,
        weierstrass,
        cubic,
        smooth,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusDoc {
    pub command: String,
    pub surface: SurfaceJson,
    pub fiber: Fiber,
    pub census: ComponentCensus,
}

fn census(s: &QuotientSurface, which: Fiber) -> Result<(CensusDoc, SeparatedCurve)> {
    let curve = which.separated(s)?;
    let census = real_component_census(&curve)?;
    Ok((
        CensusDoc {
            command: "census".into(),
            surface: s.to_json(),
            fiber: which,
            census,
        },
        curve,
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionDoc {
    pub command: String,
    pub curve: WeierstrassCurve,
    pub point: ECPoint,
    #[serde(flatten)]
    pub verdict: TorsionVerdict,
}

fn torsion(curve: WeierstrassCurve, point: ECPoint) -> Result<TorsionDoc> {
    let verdict = torsion_test(&curve, &point)?;
    Ok(TorsionDoc {
        command: "torsion".into(),
        curve,
        point,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChordDoc {
    pub command: String,
    pub surface: SurfaceJson,
    pub y: RatStr,
    pub cubic: PlaneCubic,
    pub start: ProjPoint,
    /// `Q_0, ..., Q_steps` with `Q_n = (3n+1) start`.
    pub walk: Vec<ProjPoint>,
    pub verdict: ChordTorsionVerdict,
}

fn chord_walk(s: &QuotientSurface, y: &Rat, start: ProjPoint, steps: usize) -> Result<ChordDoc> {
    let cubic = s.fiber_y(y)?;
    if !cubic.contains(&start) {
        return Err(BadArg(format!(
            "start point {start} is not on the fiber y = {}",
            RatStr(y.clone())
        ))
        .into());
    }
    cubic.require_smooth()?;
    let walk = cubic.chord_sequence(&start, steps)?;
    let verdict = chord_torsion_test(&cubic, &start)?;
    Ok(ChordDoc {
        command: "chord-walk".into(),
        surface: s.to_json(),
        y: RatStr(y.clone()),
        cubic,
        start,
        walk,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistDoc {
    pub command: String,
    pub surface: SurfaceJson,
    pub count: usize,
    pub height: u64,
    #[serde(flatten)]
    pub search: TwistSearch,
}

fn twist_pairs(s: &QuotientSurface, count: usize, height: u64) -> Result<TwistDoc> {
    let f = build_family(Variant::General { k: s.k, n: s.n })?;
    let search = simultaneous_twists(s, &f, count, height)?;
    Ok(TwistDoc {
        command: "twist-pairs".into(),
        surface: s.to_json(),
        count,
        height,
        search,
    })
}

/// Independent re-check of each twist witness, beyond rerunning the search.
fn check_twists(doc: &TwistDoc, s: &QuotientSurface) -> Result<()> {
    let f = build_family(Variant::General { k: s.k, n: s.n })?;
    let mut seen = std::collections::HashSet::new();
    for w in &doc.search.witnesses {
        if !w.verify(s) {
            return Err(fail(format!(
                "twist witness at u = {} fails substitution",
                w.u
            )));
        }
        let (class, l) = twist_class_of_u(s, &f, &w.u.0)?;
        if class != w.class || l != w.l.0 {
            return Err(fail(format!(
                "u = {} does not produce the recorded twist",
                w.u
            )));
        }
        if !seen.insert(&w.class) {
            return Err(fail(format!("class of u = {} repeats", w.u)));
        }
    }
    Ok(())
}

fn pencil_outcome(a: &PencilArgs) -> Result<DensityOutcome> {
    let (curve, variant) = match a.deg {
        4 => (
            WeierstrassCurve::new(a.a.clone(), int(0))?,
            Variant::Quartic1728,
        ),
        6 => (
            WeierstrassCurve::new(int(0), a.b.clone())?,
            Variant::Sextic0,
        ),
        d => return Err(BadArg(format!("--deg must be 4 or 6, got {d}")).into()),
    };
    let pencil = TwistPencil::new(curve, a.deg, a.c.clone(), a.d.clone())?;
    let family = build_family(variant)?;
    let caps = PencilCaps {
        retries: a.retries,
        search_steps: a.search_steps,
    };
    match pencil_density_witness(&pencil, &family, &a.t1, &a.eps, caps) {
        Ok(w) => Ok(DensityOutcome::Witness(Box::new(w))),
        Err(DensityError::CapExceeded(reason)) => Ok(DensityOutcome::Inconclusive { reason }),
        Err(e) => Err(e.into()),
    }
}

fn kummer_outcome(a: &KummerArgs) -> Result<DensityOutcome> {
    let s = a.surface.surface()?;
    let [x, y, t] = &a.seed.0;
    let caps = KummerCaps {
        multiples: a.multiples,
        chord_steps: a.chord_steps,
        cert_retries: a.cert_retries,
        max_height_bits: a.max_height_bits,
    };
    match kummer_density_witness(&s, (x, y, t), &a.t1, &a.eps, caps) {
        Err(DensityError::CapExceeded(reason)) => Ok(DensityOutcome::Inconclusive { reason }),
        r => Ok(r?),
    }
}

fn outcome(o: DensityOutcome) -> Result<Emit> {
    match o {
        DensityOutcome::Witness(_) => Emit::ok(&o),
        DensityOutcome::Inconclusive { .. } => Emit::inconclusive(&o),
    }
}

#[derive(Serialize)]
struct VerifyDoc {
    command: &'static str,
    subject: String,
    verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
}

fn verified(subject: &str) -> Result<Emit> {
    Emit::ok(&VerifyDoc {
        command: "verify",
        subject: subject.into(),
        verified: true,
        reason: None,
    })
}

/// Parses `text` as `T` and requires it to be in canonical serialized form.
fn canonical<T: Serialize + DeserializeOwned>(text: &str) -> Result<T> {
    let doc: T = serde_json::from_str(text).context("parsing document")?;
    if to_json(&doc)? != text.trim_end() {
        return Err(fail(
            "document is not byte-identical to its canonical serialization",
        ));
    }
    Ok(doc)
}

fn same<T: PartialEq>(doc: &T, rebuilt: &T, what: &str) -> Result<()> {
    if doc == rebuilt {
        Ok(())
    } else {
        Err(fail(format!("recomputed {what} differs from the document")))
    }
}

fn surface_of(j: &SurfaceJson) -> Result<QuotientSurface> {
    Ok(QuotientSurface::from_json(j)?)
}

pub fn verify_text(text: &str) -> Result<Emit> {
    let v: serde_json::Value = serde_json::from_str(text).context("parsing document")?;
    if v.get("status").is_some() {
        let o: DensityOutcome = canonical(text)?;
        return match o {
            DensityOutcome::Witness(w) => {
                verify_witness(&w).map_err(fail)?;
                let subject = match w.kind {
                    WitnessKind::Pencil => "density-pencil",
                    WitnessKind::Kummer => "density-kummer",
                };
                verified(subject)
            }
            DensityOutcome::Inconclusive { reason } => Emit::inconclusive(&VerifyDoc {
                command: "verify",
                subject: "density".into(),
                verified: false,
                reason: Some(reason),
            }),
        };
    }
    let cmd = v
        .get("command")
        .and_then(|c| c.as_str())
        .ok_or_else(|| anyhow!("document has neither a \"command\" nor a \"status\" field"))?
        .to_string();
    match cmd.as_str() {
        "verify-identities" => {
            let d: IdentitiesDoc = canonical(text)?;
            same(&d, &identities(d.variant)?, "identity report")?;
            if !d.verified {
                return Err(fail("identities do not hold"));
            }
        }
        "eval-param" => {
            let d: EvalDoc = canonical(text)?;
            same(&d, &eval_param(d.variant, &d.coeffs, &d.u.0)?, "evaluation")?;
        }
        "surface-contains" => {
            let d: ContainsDoc = canonical(text)?;
            let s = surface_of(&d.surface)?;
            let p = [
                d.point.0 .0.clone(),
                d.point.1 .0.clone(),
                d.point.2 .0.clone(),
            ];
            same(&d, &contains(&s, &p), "membership")?;
        }
        "fiber" => {
            let d: FiberDoc = canonical(text)?;
            same(
                &d,
                &fiber(&surface_of(&d.surface)?, d.fiber.clone())?,
                "fiber",
            )?;
        }
        "census" => {
            let d: CensusDoc = canonical(text)?;
            same(
                &d,
                &census(&surface_of(&d.surface)?, d.fiber.clone())?.0,
                "census",
            )?;
        }
        "torsion" => {
            let d: TorsionDoc = canonical(text)?;
            same(
                &d,
                &torsion(d.curve.clone(), d.point.clone())?,
                "torsion verdict",
            )?;
        }
        "chord-walk" => {
            let d: ChordDoc = canonical(text)?;
            let steps = d
                .walk
                .len()
                .checked_sub(1)
                .ok_or_else(|| fail("empty walk"))?;
            same(
                &d,
                &chord_walk(&surface_of(&d.surface)?, &d.y.0, d.start.clone(), steps)?,
                "chord walk",
            )?;
        }
        "twist-pairs" => {
            let d: TwistDoc = canonical(text)?;
            let s = surface_of(&d.surface)?;
            check_twists(&d, &s)?;
            same(&d, &twist_pairs(&s, d.count, d.height)?, "twist search")?;
        }
        other => bail!("unknown command {other:?}"),
    }
    verified(&cmd)
}

fn read_input(path: &std::path::Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .context("reading stdin")?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn family_doc(a: &FamilyArgs) -> Result<Emit> {
    let d = identities(a.variant())?;
    if !d.verified {
        bail!("identities do not hold for {}", a.variant());
    }
    Emit::ok(&d)
}

fn eval_doc(a: &EvalArgs) -> Result<Emit> {
    let c = &a.coeffs;
    let co = Coeffs::new(c.a.clone(), c.b.clone(), c.c.clone(), c.d.clone());
    Emit::ok(&eval_param(a.family.variant(), &co, &a.u)?)
}

fn contains_doc(a: &ContainsArgs) -> Result<Emit> {
    Emit::ok(&contains(&a.surface.surface()?, &a.point.0))
}

fn fiber_doc(a: &FiberArgs) -> Result<Emit> {
    Emit::ok(&fiber(&a.surface.surface()?, Fiber::from_sel(&a.sel)?)?)
}

fn census_doc(a: &CensusArgs) -> Result<Emit> {
    let (doc, curve) = census(&a.surface.surface()?, Fiber::from_sel(&a.sel)?)?;
    if let Some(path) = &a.plot_data {
        let csv = plot::csv(&plot::locus(&curve, &doc.census, a.samples), &[]);
        write_atomic(path, csv.as_bytes())?;
    }
    Emit::ok(&doc)
}

fn torsion_doc(a: &TorsionArgs) -> Result<Emit> {
    let curve: WeierstrassCurve = serde_json::from_str(&a.curve).context("parsing --curve")?;
    let point: ECPoint = serde_json::from_str(&a.point).context("parsing --point")?;
    Emit::ok(&torsion(curve, point)?)
}

fn chord_doc(a: &ChordArgs) -> Result<Emit> {
    let s = a.surface.surface()?;
    let [x, t] = &a.point.0;
    let doc = chord_walk(&s, &a.y, ProjPoint::affine(x.clone(), t.clone()), a.steps)?;
    if let Some(path) = &a.plot_data {
        let curve = s.fiber_y_separated(&a.y)?;
        let c = real_component_census(&curve)?;
        let csv = plot::csv(&plot::locus(&curve, &c, a.samples), &doc.walk);
        write_atomic(path, csv.as_bytes())?;
    }
    Emit::ok(&doc)
}

fn twist_doc(a: &TwistArgs) -> Result<Emit> {
    let d = twist_pairs(&a.surface.surface()?, a.count, a.height)?;
    if d.search.shortfall {
        Emit::inconclusive(&d)
    } else {
        Emit::ok(&d)
    }
}

pub fn run(cmd: Command) -> Result<Emit> {
    match cmd {
        Command::VerifyIdentities(a) => family_doc(&a),
        Command::EvalParam(a) => eval_doc(&a),
        Command::SurfaceContains(a) => contains_doc(&a),
        Command::Fiber(a) => fiber_doc(&a),
        Command::Census(a) => census_doc(&a),
        Command::Torsion(a) => torsion_doc(&a),
        Command::ChordWalk(a) => chord_doc(&a),
        Command::TwistPairs(a) => twist_doc(&a),
        Command::DensityPencil(a) => outcome(pencil_outcome(&a)?),
        Command::DensityKummer(a) => outcome(kummer_outcome(&a)?),
        Command::Verify(a) => verify_text(&read_input(&a.file)?),
    }
}
