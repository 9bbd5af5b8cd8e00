//! Exact arithmetic: rationals, polynomials, rational functions, real roots.

pub mod algebraic;
pub mod mpoly;
pub mod parse;
pub mod rat;
pub mod ratfunc;
pub mod resultant;
pub mod sturm;
pub mod upoly;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("denominator {0} vanishes at the point")]
    Pole(String),
    #[error("variable {0} has no value")]
    Unassigned(char),
    #[error("not univariate: {0}")]
    NotUnivariate(String),
    #[error("zero polynomial")]
    ZeroPolynomial,
}

pub use algebraic::{AlgebraicReal, ExtReal};
pub use mpoly::{MPoly, Monomial, Var};
pub use parse::parse_ratfunc;
pub use rat::{Rat, RatStr};
pub use ratfunc::{ratfunc_equal, RatFunc};
pub use sturm::{count_real_roots, isolate_real_roots, refine_box, RootBox};
pub use upoly::UPoly;
