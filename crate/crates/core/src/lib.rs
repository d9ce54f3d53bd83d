//! Numerical laboratory for the Nyman–Beurling approach to the zeros of ζ.
//!
//! The crate evaluates combinations of dilated fractional parts
//! `φ(t) = Σ h_k {t/l_k}` on `(1, ∞)`, integrates them exactly against the
//! probability measure `dt/t²`, assembles certified Gram systems and solves the
//! constrained least-squares problem of approximating the constant `1`.
//! Supporting complex evaluators for ζ, Γ and ξ check the functional equation
//! and locate zeros on the critical line.

// Negated comparisons are used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod approx;
pub mod bstar;
pub mod cli;
mod error;
pub mod integrals;
mod numeric;

pub use analytic::{
    find_critical_zeros, functional_equation_residual, gamma, xi, zeta, ComplexEvalReport, ComplexPoint,
};

pub use approx::{
    best_approximation, necessary_condition_gap, sweep, ApproximationResult, DilationFamily, SweepRecord,
};
pub use bstar::{BFunction, BStarFunction, StepProfile};
pub use error::{Error, Result};
pub use integrals::{
    bstar_moment, euler_gamma, gram_system, lambda_n, lemma1_moment, mstar_measure, mstar_norm, GramSystem,
    MomentReport,
};
