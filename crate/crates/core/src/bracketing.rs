//! Dirichlet–Neumann bracketing on the cylinder `r <= a`.
//!
//! Imposing a Dirichlet condition on `r = a` decouples the inner cylinder,
//! whose eigenvalues are `((2k+1)π/2d)² + (x_{n,l}/a)²`. Each such level
//! below `(π/d)²` forces a discrete eigenvalue of the full operator. Since
//! `(3π/2d)² > (π/d)²`, only `k = 0` levels can lie below the continuum, and
//! `λ_{0,n,l} < (π/d)²` rearranges to `x_{n,l} < (√3/2)·π·a/d`.

use std::f64::consts::PI;

use crate::bessel::{zeros_below, BesselZero, MultiplicityRule};
use crate::error::{Result, SpectralError};
use crate::geometry::{SpectralWindow, WaveguideGeometry};

/// Value of the uniqueness threshold for `(a/d)²` reported in the literature.
pub const REPORTED_UNIQUENESS_THRESHOLD: f64 = 1.9276;

/// `(√3/2)·π`: a zero `x` yields a bound state once `a/d > x / THRESHOLD_SLOPE`.
pub const THRESHOLD_SLOPE: f64 = 0.866_025_403_784_438_6 * PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BracketSide {
    DirichletInner,
    NeumannInner,
}

/// One eigenvalue of the inner cylinder with a condition on `r = a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketLevel {
    pub k: u32,
    pub zero: BesselZero,
    pub value: f64,
    pub side: BracketSide,
}

pub fn spectral_window(g: &WaveguideGeometry) -> SpectralWindow {
    SpectralWindow {
        lower: g.transverse_ground(),
        upper: g.continuum_threshold(),
    }
}

/// All inner-Dirichlet levels strictly below `cap`, ascending.
pub fn dirichlet_bracket_levels(
    g: &WaveguideGeometry,
    cap: f64,
    rule: MultiplicityRule,
) -> Result<Vec<BracketLevel>> {
    if g.a() == 0.0 {
        return Err(SpectralError::DegenerateGeometry(
            "inner cylinder is empty for a = 0".into(),
        ));
    }
    if !(cap > g.transverse_ground()) {
        return Err(SpectralError::Precondition(format!(
            "cap {cap} must exceed the transverse ground energy {}",
            g.transverse_ground()
        )));
    }
    let mut levels = Vec::new();
    let mut k = 0;
    while g.transverse_level(k) < cap {
        let transverse = g.transverse_level(k);
        let radial_bound = g.a() * (cap - transverse).sqrt();
        for zero in zeros_below(radial_bound, rule)? {
            let value = transverse + (zero.value / g.a()).powi(2);
            if value < cap {
                levels.push(BracketLevel {
                    k,
                    zero,
                    value,
                    side: BracketSide::DirichletInner,
                });
            }
        }
        k += 1;
    }
    levels.sort_by(|x, y| x.value.total_cmp(&y.value).then(x.k.cmp(&y.k)));
    Ok(levels)
}

/// Radial cutoff `(√3/2)·π·r` for the zeros counted at ratio `r = a/d`.
pub fn zero_cutoff(ratio: f64) -> f64 {
    THRESHOLD_SLOPE * ratio
}

/// Ratio `a/d` at which the zero `x` starts to contribute a bound state.
pub fn step_ratio(x: f64) -> f64 {
    x / THRESHOLD_SLOPE
}

fn count_for_ratio(ratio: f64, rule: MultiplicityRule) -> Result<usize> {
    if ratio <= 0.0 {
        return Ok(0);
    }
    Ok(zeros_below(zero_cutoff(ratio), rule)?.len())
}

/// Number of inner-Dirichlet levels below `(π/d)²`, a guaranteed lower bound
/// on the number of discrete eigenvalues.
pub fn count_bound_states_upper(g: &WaveguideGeometry, rule: MultiplicityRule) -> usize {
    count_for_ratio(g.ratio(), rule).expect("cutoff is positive")
}

/// Largest `(a/d)²` below which at most one bracket level sits under the continuum.
pub fn uniqueness_threshold(rule: MultiplicityRule) -> f64 {
    uniqueness_threshold_report(rule).derived
}

/// The derived threshold next to the literature value and the value obtained
/// by substituting the leading asymptotic for `x_{1,1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdReport {
    pub derived: f64,
    pub second_zero: BesselZero,
    pub reported: f64,
    pub from_asymptotic_zero: f64,
}

impl ThresholdReport {
    /// `(derived - reported) / reported`.
    pub fn relative_discrepancy(&self) -> f64 {
        (self.derived - self.reported) / self.reported
    }
}

pub fn uniqueness_threshold_report(rule: MultiplicityRule) -> ThresholdReport {
    let zeros = zeros_below(8.0, rule).expect("bound is positive");
    // The second distinct threshold; under angular degeneracy x_{1,1} is the
    // second entry as well, since only n >= 1 zeros are repeated.
    let second = zeros[1];
    let derived = step_ratio(second.value).powi(2);
    let asymptotic = crate::bessel::asymptotic_zero(second.order, second.index);
    ThresholdReport {
        derived,
        second_zero: second,
        reported: REPORTED_UNIQUENESS_THRESHOLD,
        from_asymptotic_zero: step_ratio(asymptotic).powi(2),
    }
}

/// Two consecutive closed-form levels around an energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sandwich {
    pub lower: f64,
    pub upper: f64,
}

impl Sandwich {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Tightest pair among `{(π/2d)²} ∪ {(π/2d)² + (x/a)²} ∪ {(π/d)²}` enclosing `lam`.
pub fn asymptotic_sandwich(g: &WaveguideGeometry, lam: f64) -> Result<Sandwich> {
    let window = spectral_window(g);
    if !window.contains_open(lam) {
        return Err(SpectralError::OutOfWindow {
            energy: lam,
            lower: window.lower,
            upper: window.upper,
        });
    }
    let mut lower = window.lower;
    let mut upper = window.upper;
    if g.a() > 0.0 {
        // Only k = 0 levels lie in the window. A level is <= lam exactly when
        // its zero is <= a·sqrt(lam - (π/2d)²); the next zero of J_0 always
        // follows within π + 1 of any point.
        let split = g.a() * (lam - window.lower).sqrt();
        for zero in zeros_below(split + PI + 1.0, MultiplicityRule::Single)? {
            let value = window.lower + (zero.value / g.a()).powi(2);
            if value <= lam {
                lower = lower.max(value);
            } else {
                upper = upper.min(value);
            }
        }
    }
    Ok(Sandwich { lower, upper })
}

/// Bound-state counts `(ratio, count)` on a grid of ratios `a/d`.
pub fn figure_counts(ratios: &[f64], rule: MultiplicityRule) -> Result<Vec<(f64, usize)>> {
    if ratios.iter().any(|r| !(*r > 0.0) || !r.is_finite()) {
        return Err(SpectralError::Precondition(
            "ratios must be positive and finite".into(),
        ));
    }
    if ratios.windows(2).any(|w| w[1] < w[0]) {
        return Err(SpectralError::Precondition(
            "ratios must be ascending".into(),
        ));
    }
    let Some(&max) = ratios.last() else {
        return Ok(Vec::new());
    };
    let zeros = zeros_below(zero_cutoff(max), rule)?;
    Ok(ratios
        .iter()
        .map(|&r| {
            let cutoff = zero_cutoff(r);
            (r, zeros.partition_point(|z| z.value < cutoff))
        })
        .collect())
}

/// Ratios at which the counting function jumps, up to `max_ratio`.
pub fn step_locations(max_ratio: f64, rule: MultiplicityRule) -> Result<Vec<f64>> {
    let mut steps: Vec<f64> = zeros_below(zero_cutoff(max_ratio), rule)?
        .iter()
        .map(|z| step_ratio(z.value))
        .collect();
    steps.dedup();
    Ok(steps)
}
