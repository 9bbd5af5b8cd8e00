//! Exact arithmetic, elliptic fibrations and rational-point witnesses on
//! quotient surfaces `f(t) y^k = g(x)`.

pub mod cubic;
pub mod density;
pub mod elliptic;
pub mod exact;
pub mod factor;
pub mod family;
pub mod surface;
pub mod twist;

pub use cubic::{
    chord_torsion_test, ChordTorsionVerdict, ChordWalker, CubicError, PlaneCubic, ProjPoint,
};
pub use density::{
    approximate_u_for_t, half_interval, kummer_density_witness, pencil_density_witness,
    verify_witness, DensityError, DensityOutcome, DensityWitness, HalfInterval, KummerCaps,
    PencilCaps,
};
pub use elliptic::{
    ec_add, ec_mul, quadratic_twist, to_integral_model, torsion_test, ECPoint, EllipticError,
    TorsionVerdict, WeierstrassCurve,
};
pub use exact::{AlgebraicReal, ExactError, MPoly, Rat, RatFunc, RatStr, RootBox, UPoly, Var};
pub use family::{
    build_family, eval_family, verify_family_identities, Coeffs, FamilyError, ParamFamily, Variant,
};
pub use surface::{
    assumption_bounds_check, oval_contains, real_component_census, surface_contains,
    ComponentCensus, QuotientSurface, SeparatedCurve, SurfaceError, TwistPencil,
};
pub use twist::{
    kth_power_free_class, simultaneous_twists, twist_class_of_u, KthPowerFreeClass, TwistError,
    TwistPairWitness,
};
