//! Copula families and grid verification of monotonicity according to a
//! direction.
//!
//! A random vector is `I(α)` (resp. `D(α)`) when `P[αX > x | αX > x']` is
//! nondecreasing (resp. nonincreasing) in `x'` for every `x`. For a copula
//! this reduces to product inequalities between signed sums of its
//! marginals. This crate evaluates those sums ([`orthant`]), checks the
//! inequalities and the defining conditionals on a lattice ([`checker`]),
//! and classifies every sign vector `α ∈ {-1, +1}^n`.
//!
//! ```
//! use dirmono_core::{scan_all_directions, CheckOptions, CopulaSpec, GridSpec, Method};
//!
//! let fgm = CopulaSpec::fgm(2, 0.5).unwrap();
//! let report = scan_all_directions(&fgm, GridSpec::new(9).unwrap(), Method::Both, &CheckOptions::default());
//! let passed: Vec<String> = report.passed_directions().iter().map(|d| d.tokens()).collect();
//! assert_eq!(passed, ["+,+", "-,-"]);
//! ```

pub mod axioms;
pub mod checker;
pub mod domain;
pub mod error;
pub mod families;
pub mod orthant;

/// Largest supported dimension; axis subsets are stored as `u32` masks.
pub const MAX_DIM: usize = 16;

pub use checker::{
    check_direction_inequality, check_direction_oracle, check_pair_mixed, check_pair_pure,
    scan_all_directions, scan_directions, CheckOptions, Counterexample, DirectionVerdict, GridSpec,
    Method, MethodDisagreement, MethodStats, Outcome, PairOutcome, ScanReport, DEFAULT_TOL,
};
pub use domain::{
    box_volume, join_direction, DependenceNotion, Direction, Sign, UnitBox, UnitPoint,
};
pub use error::{Error, Result};
pub use families::{validate, CopulaSpec, Family};
pub use orthant::{
    conditional_prob, marginal_eval, orthant_prob, MarginalSelector, OrthantExpansion,
    SignedSumTerm, DEFAULT_EPS_DEN,
};
