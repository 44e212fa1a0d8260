//! Numerical evaluation of the discrete analogues of the Appell function F2
//! and mechanical verification of the identities they satisfy.
//!
//! The crate is organized around six pieces:
//!
//! * [`gamma`] — complex log-gamma, Pochhammer symbols, and the signed
//!   discrete factor with its product factorization;
//! * [`series`] — the anti-diagonal double-series engine and the general
//!   Kampé de Fériet evaluator;
//! * [`appell`] — classical F2, its three discrete analogues, the discrete
//!   Humbert functions, and the limit checks among them;
//! * [`operators`] — composable shift (Δ, ρ, Θ) and Euler (θ, φ) operators
//!   with residual checks of the difference-differential equations;
//! * [`quadrature`] — Gauss-Legendre/Gauss-Laguerre verification of the
//!   Euler- and Laplace-type integral representations;
//! * [`identities`] — the executable identity catalog and suite runner.

pub mod appell;
pub mod error;
pub mod gamma;
pub mod identities;
pub mod operators;
pub mod quadrature;
pub mod serde_util;
pub mod series;

pub use appell::{
    check_humbert_limit, eval_discrete_f2, eval_f2, eval_humbert, DiscreteParams, EvalPoint,
    HumbertKind, ParameterSet,
};
pub use error::EvalError;
pub use identities::{
    default_grid, run_suite, IdentityCheckResult, IdentityFamily, IdentityId, SuiteReport,
    SuiteSummary, Tolerances, VariantTag,
};
pub use num_complex::Complex64;
pub use operators::{
    apply, residual_difference_equation, DifferenceEquation, EvalContext, EvaluableFunction,
    OperatorExpr,
};
pub use quadrature::{eval_integral_rep, verify_integral_rep, IntegralRepId, QuadratureRule};
pub use series::{
    eval_kdf, sum_double_series, KdFSpec, SeriesValue, Status, SummationConfig, TermIndex,
    TerminationBounds,
};
