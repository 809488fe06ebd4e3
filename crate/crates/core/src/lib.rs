//! Exact decision procedures for extreme contractions between
//! finite-dimensional normed spaces whose unit balls are polytopes (plus the
//! Euclidean cases l2 → l∞ and polytope → l2).
//!
//! Everything is computed over arbitrary-precision rationals: norms, operator
//! norms, linear programs, and vertex enumeration. No floating point enters a
//! decision.
//!
//! ```
//! use extremal_core::{decide, LinearOperator, Matrix, NormedSpace};
//!
//! let t = LinearOperator::new(
//!     Matrix::from_int_rows(&[&[1, 0], &[1, 0]]),
//!     NormedSpace::l2(2),
//!     NormedSpace::linf(2),
//! )
//! .unwrap();
//! assert!(decide(&t).unwrap().is_extreme());
//! ```

pub mod dd;
pub mod enumeration;
pub mod error;
pub mod extremality;
pub mod linalg;
pub mod lp;
pub mod operator;
pub mod polytope;
pub mod rational;
pub mod schema;
pub mod space;

pub use enumeration::{
    backward_candidates, check_lp_property, composition_closure, enumerate, enumerate_l1,
    enumerate_operator_ball, ClosureReport, EnumerationMethod, EnumerationOptions,
    ExtremeContractionSet, LpPropertyOptions, LpPropertyReport,
};
pub use error::{Error, Result};
pub use extremality::{
    audit_attainment, decide, decide_with, l1_rule, perturbation_oracle, rank_test, unit_row_rule,
    AuditReport, AuditStatus, DecideOptions, Decision, ExtremalityVerdict, Method,
};
pub use linalg::{rank, solve_linear, LinearSolution, Matrix, Vector};
pub use operator::{LinearOperator, NormAttainment};
pub use polytope::SymmetricPolytope;
pub use rational::{format_rational, parse_rational, Rational};
pub use space::{ExtremeSet, NormValue, NormedSpace, SpaceKind};
