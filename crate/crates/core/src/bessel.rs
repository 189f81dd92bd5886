//! Bessel functions of the first kind `J_n` of integer order and their
//! positive zeros `x_{n,l}`.
//!
//! `J_n` is evaluated by its power series near the origin, by Miller's
//! backward recurrence normalized with `J_0 + 2 Σ J_{2k} = 1` for moderate
//! arguments, and by the Hankel expansion for large arguments. Zeros are
//! located by a sign-change scan (no zero of `J_n` lies in `(0, n]`) and
//! polished by Newton steps that are confined to the bracketing interval.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;

use crate::error::{Result, SpectralError};

/// Largest argument evaluated with the power series.
const SERIES_MAX_X: f64 = 8.0;
/// Arguments above this (with small enough order) use the Hankel expansion.
const HANKEL_MIN_X: f64 = 200.0;
/// Step of the sign-change scan. Consecutive zeros are more than 2.4 apart.
const SCAN_STEP: f64 = 0.5;

/// Non-negative integer order of a Bessel function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BesselOrder(u32);

impl BesselOrder {
    pub const fn new(n: u32) -> Self {
        Self(n)
    }

    /// Folds a signed order into a stored order and the sign of `J_{-n} = (-1)^n J_n`.
    pub fn fold(n: i64) -> Result<(Self, f64)> {
        let abs = u32::try_from(n.unsigned_abs())
            .map_err(|_| SpectralError::Domain(format!("order {n} out of range")))?;
        let sign = if n < 0 && abs % 2 == 1 { -1.0 } else { 1.0 };
        Ok((Self(abs), sign))
    }

    /// Accepts a real-valued order, rejecting anything that is not a non-negative integer.
    pub fn from_real(nu: f64) -> Result<Self> {
        if !nu.is_finite() || nu < 0.0 || nu.fract() != 0.0 || nu > f64::from(u32::MAX) {
            return Err(SpectralError::Domain(format!(
                "Bessel order must be a non-negative integer, got {nu}"
            )));
        }
        Ok(Self(nu as u32))
    }

    pub const fn get(self) -> u32 {
        self.0
    }
}

impl From<u32> for BesselOrder {
    fn from(n: u32) -> Self {
        Self(n)
    }
}

impl fmt::Display for BesselOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The `index`-th positive zero of `J_order`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselZero {
    pub order: BesselOrder,
    pub index: u32,
    pub value: f64,
}

/// How zeros of `J_n` with `n >= 1` are counted.
///
/// The modes `e^{±inθ}` share a radial equation, so every zero with
/// `n >= 1` labels two eigenfunctions of the disc. `Single` counts each zero
/// once; `AngularDegeneracy` counts it twice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MultiplicityRule {
    #[default]
    Single,
    AngularDegeneracy,
}

impl MultiplicityRule {
    pub fn multiplicity(self, order: BesselOrder) -> usize {
        match self {
            Self::AngularDegeneracy if order.get() > 0 => 2,
            _ => 1,
        }
    }
}

/// `J_n(x)` for `x >= 0`.
pub fn bessel_j(n: BesselOrder, x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(SpectralError::Domain(format!(
            "bessel_j requires a finite x >= 0, got {x}"
        )));
    }
    Ok(j_nonneg(n.get(), x))
}

/// `J_n(x)` for any signed order and any real `x`, via the reflection formulas.
pub fn bessel_j_signed(n: i64, x: f64) -> Result<f64> {
    let (order, sign) = BesselOrder::fold(n)?;
    if x < 0.0 {
        let parity = if order.get() % 2 == 1 { -1.0 } else { 1.0 };
        return Ok(sign * parity * bessel_j(order, -x)?);
    }
    Ok(sign * bessel_j(order, x)?)
}

/// `(J_n(x), J_n'(x))` for `x > 0`.
pub fn bessel_j_with_derivative(n: BesselOrder, x: f64) -> Result<(f64, f64)> {
    let value = bessel_j(n, x)?;
    Ok((value, derivative(n.get(), x, value)))
}

fn derivative(n: u32, x: f64, jn: f64) -> f64 {
    if n == 0 {
        -j_nonneg(1, x)
    } else if x == 0.0 {
        if n == 1 {
            0.5
        } else {
            0.0
        }
    } else {
        j_nonneg(n - 1, x) - f64::from(n) / x * jn
    }
}

pub(crate) fn j_nonneg(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let nf = f64::from(n);
    if x <= SERIES_MAX_X || 0.25 * x * x <= nf + 1.0 {
        series(n, x)
    } else if x > HANKEL_MIN_X && nf * nf <= 0.1 * x {
        hankel(n, x)
    } else {
        miller(n, x)
    }
}

fn series(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    // (x/2)^n / n!, built incrementally so large n underflows gracefully.
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / f64::from(k);
        if term == 0.0 {
            return 0.0;
        }
    }
    let q = -half * half;
    let mut sum = term;
    let mut k = 1.0;
    loop {
        term *= q / (k * (k + f64::from(n)));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs().max(1e-300) || k > 500.0 {
            break;
        }
        k += 1.0;
    }
    sum
}

fn miller(n: u32, x: f64) -> f64 {
    let nf = f64::from(n);
    let top = nf.max(x);
    let mut start = (top + 50.0 + 6.0 * top.cbrt()).ceil() as u32;
    start += start % 2;

    let mut above = 0.0;
    let mut current = 1e-300;
    let mut target = 0.0;
    let mut norm = 0.0;
    let two_over_x = 2.0 / x;
    for k in (1..=start).rev() {
        // current = j_k, above = j_{k+1}
        let below = f64::from(k) * two_over_x * current - above;
        above = current;
        current = below;
        // current now holds j_{k-1}
        let order = k - 1;
        if order == n {
            target = current;
        }
        if order > 0 && order % 2 == 0 {
            norm += 2.0 * current;
        }
        if current.abs() > 1e250 {
            current *= 1e-250;
            above *= 1e-250;
            target *= 1e-250;
            norm *= 1e-250;
        }
    }
    norm += current;
    target / norm
}

fn hankel(n: u32, x: f64) -> f64 {
    let mu = 4.0 * f64::from(n) * f64::from(n);
    let eight_x = 8.0 * x;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..60u32 {
        let odd = f64::from(2 * k - 1);
        a *= (mu - odd * odd) / (f64::from(k) * eight_x);
        if a.abs() > prev {
            break;
        }
        prev = a.abs();
        match k % 4 {
            1 => q += a,
            2 => p -= a,
            3 => q -= a,
            _ => p += a,
        }
        if a.abs() < 1e-17 {
            break;
        }
    }
    let phase = x - (0.5 * f64::from(n) + 0.25) * PI;
    (2.0 / (PI * x)).sqrt() * (p * phase.cos() - q * phase.sin())
}

/// Leading asymptotic `x_{n,l} ~ (n + 2l - 1/2) π/2`.
pub fn asymptotic_zero(n: BesselOrder, l: u32) -> f64 {
    (f64::from(n.get()) + 2.0 * f64::from(l) - 0.5) * FRAC_PI_2
}

/// McMahon's expansion through the `β^{-3}` term, used to seed Newton steps.
pub fn mcmahon_estimate(n: BesselOrder, l: u32) -> f64 {
    let beta = (f64::from(l) + 0.5 * f64::from(n.get())) * PI - FRAC_PI_4;
    let mu = 4.0 * f64::from(n.get()).powi(2);
    let e = 8.0 * beta;
    beta - (mu - 1.0) / e - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e.powi(3))
}

/// Refines a zero of `J_n` inside the sign-change bracket `[lo, hi]`.
/// Newton steps that would leave the bracket are replaced by bisection.
fn refine_in_bracket(n: u32, mut lo: f64, mut hi: f64, seed: f64) -> f64 {
    let f_lo = j_nonneg(n, lo);
    if f_lo == 0.0 {
        return lo;
    }
    let lo_positive = f_lo > 0.0;
    let mut x = if seed > lo && seed < hi { seed } else { 0.5 * (lo + hi) };
    for _ in 0..200 {
        let fx = j_nonneg(n, x);
        if fx == 0.0 {
            return x;
        }
        if (fx > 0.0) == lo_positive {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            return 0.5 * (lo + hi);
        }
        let step = fx / derivative(n, x, fx);
        let newton = x - step;
        if step.is_finite() && newton > lo && newton < hi {
            x = newton;
            if step.abs() <= 2.0 * f64::EPSILON * x {
                return x;
            }
        } else {
            x = 0.5 * (lo + hi);
        }
    }
    x
}

/// Walks the positive zeros of `J_n` in increasing order.
#[derive(Debug, Clone)]
pub struct ZeroIter {
    order: BesselOrder,
    index: u32,
    left: f64,
    f_left: f64,
}

impl ZeroIter {
    pub fn new(order: BesselOrder) -> Self {
        // j_{n,1} > n, so the scan starts at x = n where J_n > 0.
        let left = f64::from(order.get());
        Self {
            order,
            index: 0,
            left,
            f_left: j_nonneg(order.get(), left),
        }
    }
}

impl Iterator for ZeroIter {
    type Item = BesselZero;

    fn next(&mut self) -> Option<BesselZero> {
        let n = self.order.get();
        loop {
            let right = self.left + SCAN_STEP;
            let f_right = j_nonneg(n, right);
            let crossed = f_right == 0.0 || (f_right > 0.0) != (self.f_left > 0.0);
            if crossed && self.f_left != 0.0 {
                self.index += 1;
                let seed = mcmahon_estimate(self.order, self.index);
                let value = if f_right == 0.0 {
                    right
                } else {
                    refine_in_bracket(n, self.left, right, seed)
                };
                self.left = right;
                // Keep the sign of J just past the zero, not an exact zero.
                self.f_left = if f_right == 0.0 {
                    j_nonneg(n, right + 1e-3)
                } else {
                    f_right
                };
                return Some(BesselZero {
                    order: self.order,
                    index: self.index,
                    value,
                });
            }
            self.left = right;
            self.f_left = f_right;
        }
    }
}

/// The `l`-th positive zero of `J_n` (1-based).
pub fn bessel_zero(n: BesselOrder, l: u32) -> Result<BesselZero> {
    if l == 0 {
        return Err(SpectralError::Precondition(
            "zero index l must be >= 1".into(),
        ));
    }
    Ok(ZeroIter::new(n)
        .nth((l - 1) as usize)
        .expect("J_n has infinitely many positive zeros"))
}

/// All zeros of `J_n` strictly below `bound`, ascending.
pub fn zeros_of_order_below(n: BesselOrder, bound: f64) -> Vec<BesselZero> {
    ZeroIter::new(n).take_while(|z| z.value < bound).collect()
}

/// Every zero `x_{n,l} < bound` over all orders `n >= 0`, ascending in value.
///
/// Under [`MultiplicityRule::AngularDegeneracy`] zeros with `n >= 1` appear twice.
pub fn zeros_below(bound: f64, rule: MultiplicityRule) -> Result<Vec<BesselZero>> {
    if !(bound > 0.0) || !bound.is_finite() {
        return Err(SpectralError::Precondition(format!(
            "zero bound must be positive and finite, got {bound}"
        )));
    }
    let mut zeros = Vec::new();
    // x_{n,1} > n ends the order loop.
    let mut n = 0u32;
    while f64::from(n) < bound {
        let order = BesselOrder(n);
        for z in zeros_of_order_below(order, bound) {
            for _ in 0..rule.multiplicity(order) {
                zeros.push(z);
            }
        }
        n += 1;
    }
    zeros.sort_by(|a, b| {
        a.value
            .total_cmp(&b.value)
            .then(a.order.cmp(&b.order))
            .then(a.index.cmp(&b.index))
    });
    Ok(zeros)
}

/// The `count` smallest zeros across all orders, each zero listed once.
pub fn smallest_zeros(count: usize) -> Vec<BesselZero> {
    if count == 0 {
        return Vec::new();
    }
    let mut bound = 4.0;
    loop {
        let zeros = zeros_below(bound, MultiplicityRule::Single).expect("bound is positive");
        if zeros.len() >= count {
            return zeros.into_iter().take(count).collect();
        }
        bound *= 1.5;
    }
}
