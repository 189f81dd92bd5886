//! Spectral toolkit for a straight Dirichlet layer `R² × [0, d]` whose bottom
//! carries a Neumann disc window of radius `a`.
//!
//! * [`bessel`]: `J_n` and its zeros.
//! * [`bracketing`]: closed-form Dirichlet bracket levels, bound-state counts,
//!   the uniqueness threshold and the large-window sandwich.
//! * [`variational`]: trial-function certificates that a bound state exists.
//! * [`fdsolver`]: finite-difference eigenvalues of the reduced `(r, z)` problem.

// `!(x > 0.0)` is the NaN-rejecting form used throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bessel;
pub mod bracketing;
pub mod error;
pub mod fdsolver;
pub mod geometry;
pub mod quadrature;
pub mod variational;

pub use bessel::{bessel_j, bessel_zero, zeros_below, BesselOrder, BesselZero, MultiplicityRule};
pub use bracketing::{
    asymptotic_sandwich, count_bound_states_upper, dirichlet_bracket_levels, figure_counts,
    spectral_window, uniqueness_threshold, BracketLevel, BracketSide, Sandwich, ThresholdReport,
};
pub use error::{Result, SpectralError};
pub use fdsolver::{
    assemble, gap_asymptotics, refine_study, solve_lowest, EigenResult, Mesh, RadialBoundary,
    ReducedProblem,
};
pub use geometry::{SpectralWindow, WaveguideGeometry};
pub use variational::{
    certify_bound_state, certify_with_profiles, energy_closed_form, energy_quadrature, tail_energy, Certificate,
    LocalizationBump, RadialProfile, TailFamily, TransverseMode, TrialParams,
};
