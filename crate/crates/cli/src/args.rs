use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kf_core::exact::rat::parse_rat;
use kf_core::{QuotientSurface, Rat, Variant};

/// Rational points, twists and density witnesses on surfaces
/// `(t^n + ct + d) y^k = x^n + ax + b`.
///
/// Rationals are written `n` or `p/q`. Every subcommand prints one JSON
/// document that `kf verify` re-checks. Exit status: 0 success, 2 inconclusive
/// (a search cap was reached), 1 error (with an error document on stdout).
/// KF_FACTOR_BITS bounds the bit size of integers the factorizer will split.
#[derive(Parser, Debug)]
#[command(name = "kf", version)]
pub struct Cli {
    /// Write the JSON document to this file (atomically) instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the curve and surface identities of a parametrized family symbolically.
    VerifyIdentities(FamilyArgs),
    /// Evaluate a family at coefficients a, b, c, d and parameter u.
    EvalParam(EvalArgs),
    /// Test whether (x, y, t) lies on a surface.
    SurfaceContains(ContainsArgs),
    /// The fiber over t = t0 (a quadratic twist) or y = y0 (a plane cubic).
    Fiber(FiberArgs),
    /// Count real connected components of a Kummer fiber.
    Census(CensusArgs),
    /// Certify a point on y^2 = x^3 + Ax + B as torsion (with order) or non-torsion.
    Torsion(TorsionArgs),
    /// Walk Q_n = (3n+1)P by chords on the cubic fiber y = y0.
    ChordWalk(ChordArgs),
    /// Find u giving pairwise distinct k-th power classes with points on both twists.
    TwistPairs(TwistArgs),
    /// Density witness for a quartic or sextic twist pencil near t1.
    DensityPencil(PencilArgs),
    /// Density witness on a Kummer surface by chord walks from a seed point.
    DensityKummer(KummerArgs),
    /// Re-check a document produced by any other subcommand ("-" reads stdin).
    Verify(VerifyArgs),
}

/// A usage problem detected after parsing.
#[derive(Debug)]
pub struct BadArg(pub String);

impl fmt::Display for BadArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for BadArg {}

pub fn q(s: &str) -> Result<Rat, String> {
    parse_rat(s).map_err(|e| e.to_string())
}

/// `N` comma-separated rationals.
#[derive(Clone, Debug)]
pub struct Tuple<const N: usize>(pub [Rat; N]);

fn tuple<const N: usize>(s: &str) -> Result<Tuple<N>, String> {
    let v = s.split(',').map(q).collect::<Result<Vec<_>, _>>()?;
    let got = v.len();
    v.try_into()
        .map(Tuple)
        .map_err(|_| format!("expected {N} comma-separated rationals, got {got}"))
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyName {
    General,
    #[value(alias = "quartic1728")]
    Quartic,
    #[value(alias = "sextic0")]
    Sextic,
}

#[derive(Args, Debug)]
pub struct FamilyArgs {
    #[arg(long, value_enum, default_value = "general")]
    pub family: FamilyName,
    /// Exponent of y (general family only).
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    /// Degree of x and t (general family only).
    #[arg(long, default_value_t = 3)]
    pub n: u32,
}

impl FamilyArgs {
    pub fn variant(&self) -> Variant {
        match self.family {
            FamilyName::General => Variant::General {
                k: self.k,
                n: self.n,
            },
            FamilyName::Quartic => Variant::Quartic1728,
            FamilyName::Sextic => Variant::Sextic0,
        }
    }
}

#[derive(Args, Debug)]
pub struct CoeffArgs {
    #[arg(long, default_value = "1", value_parser = q, allow_hyphen_values = true)]
    pub a: Rat,
    #[arg(long, default_value = "1", value_parser = q, allow_hyphen_values = true)]
    pub b: Rat,
    #[arg(long, default_value = "2", value_parser = q, allow_hyphen_values = true)]
    pub c: Rat,
    #[arg(long, default_value = "3", value_parser = q, allow_hyphen_values = true)]
    pub d: Rat,
}

/// The surface `(t^n + ct + d) y^k = x^n + ax + b`; defaults give k = 2, n = 3, (a, b, c, d) = (1, 1, 2, 3).
#[derive(Args, Debug)]
pub struct SurfaceArgs {
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    #[arg(long, default_value_t = 3)]
    pub n: u32,
    #[command(flatten)]
    pub coeffs: CoeffArgs,
}

impl SurfaceArgs {
    pub fn surface(&self) -> anyhow::Result<QuotientSurface> {
        let c = &self.coeffs;
        Ok(QuotientSurface::build(
            self.k,
            self.n,
            c.a.clone(),
            c.b.clone(),
            c.c.clone(),
            c.d.clone(),
        )?)
    }
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    pub coeffs: CoeffArgs,
    #[arg(long, value_parser = q, allow_hyphen_values = true)]
    pub u: Rat,
}

#[derive(Args, Debug)]
pub struct ContainsArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    /// `x,y,t`
    #[arg(long, value_parser = tuple::<3>, allow_hyphen_values = true)]
    pub point: Tuple<3>,
}

#[derive(Args, Debug)]
#[group(id = "fiber_sel", required = true, multiple = false, args = ["t", "y"])]
pub struct FiberSel {
    #[arg(long, value_parser = q, allow_hyphen_values = true)]
    pub t: Option<Rat>,
    #[arg(long, value_parser = q, allow_hyphen_values = true)]
    pub y: Option<Rat>,
}

#[derive(Args, Debug)]
pub struct FiberArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    #[command(flatten)]
    pub sel: FiberSel,
}

#[derive(Args, Debug)]
pub struct CensusArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    #[command(flatten)]
    pub sel: FiberSel,
    /// Also write CSV samples of the real locus to this file.
    #[arg(long, value_name = "PATH")]
    pub plot_data: Option<PathBuf>,
    /// Number of x samples in the CSV.
    #[arg(long, default_value_t = 200)]
    pub samples: u32,
}

#[derive(Args, Debug)]
pub struct TorsionArgs {
    /// Curve as JSON, e.g. '{"A":"0","B":"1"}'.
    #[arg(long)]
    pub curve: String,
    /// Point as JSON, e.g. '["2","3"]'.
    #[arg(long)]
    pub point: String,
}

#[derive(Args, Debug)]
pub struct ChordArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    /// The fiber y = y0.
    #[arg(long, value_parser = q, allow_hyphen_values = true)]
    pub y: Rat,
    /// Affine start point `x,t` on the fiber.
    #[arg(long, value_parser = tuple::<2>, allow_hyphen_values = true)]
    pub point: Tuple<2>,
    /// Last index n of Q_n.
    #[arg(long, default_value_t = 5)]
    pub steps: usize,
    /// Also write CSV samples of the real locus and the walk to this file.
    #[arg(long, value_name = "PATH")]
    pub plot_data: Option<PathBuf>,
    #[arg(long, default_value_t = 200)]
    pub samples: u32,
}

#[derive(Args, Debug)]
pub struct TwistArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    /// Number of distinct classes wanted.
    #[arg(long, default_value_t = 25)]
    pub count: usize,
    /// Largest height max(|p|, q) of u = p/q tried.
    #[arg(long, default_value_t = 60)]
    pub height: u64,
}

#[derive(Args, Debug)]
pub struct PencilArgs {
    /// Degree of f(t) = t^deg + ct + d: 4 pairs with y^2 = x^3 + ax, 6 with y^2 = x^3 + b.
    #[arg(long, default_value_t = 4)]
    pub deg: u32,
    #[arg(long, default_value = "1", value_parser = q, allow_hyphen_values = true)]
    pub a: Rat,
    #[arg(long, default_value = "1", value_parser = q, allow_hyphen_values = true)]
    pub b: Rat,
    #[arg(long, default_value = "1", value_parser = q, allow_hyphen_values = true)]
    pub c: Rat,
    #[arg(long, default_value = "1", value_parser = q, allow_hyphen_values = true)]
    pub d: Rat,
    #[arg(long, value_parser = q, allow_hyphen_values = true)]
    pub t1: Rat,
    #[arg(long, value_parser = q)]
    pub eps: Rat,
    /// Replacement candidates tried after a torsion or degenerate one.
    #[arg(long, default_value_t = 16)]
    pub retries: u32,
    /// Budget of rational probes in the parameter search.
    #[arg(long, default_value_t = kf_core::density::DEFAULT_SEARCH_STEPS)]
    pub search_steps: u64,
}

#[derive(Args, Debug)]
pub struct KummerArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    /// Seed point `x,y,t` on the surface.
    #[arg(long, default_value = "-2,1,-2", value_parser = tuple::<3>, allow_hyphen_values = true)]
    pub seed: Tuple<3>,
    #[arg(long, value_parser = q, allow_hyphen_values = true)]
    pub t1: Rat,
    #[arg(long, value_parser = q)]
    pub eps: Rat,
    /// Multiples of the seed scanned for a usable base point.
    #[arg(long, default_value_t = 64)]
    pub multiples: u32,
    /// Chord steps in each direction.
    #[arg(long, default_value_t = 200)]
    pub chord_steps: u32,
    /// Hits whose certification may fail before giving up.
    #[arg(long, default_value_t = 16)]
    pub cert_retries: u32,
    /// Stop once a walk point needs more bits than this.
    #[arg(long, default_value_t = 1 << 15)]
    pub max_height_bits: u64,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub file: PathBuf,
}
