//! Globally adaptive Gauss–Kronrod (7/15) quadrature on finite intervals,
//! plus a nested rule for rectangles.

// Published tables, kept at full printed precision.
#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Result, SpectralError};

// Kronrod abscissae, positive half, descending; XGK[1], XGK[3], XGK[5] are the Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Tolerances and budget for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-14,
            rel_tol: 1e-12,
            max_intervals: 2000,
        }
    }
}

impl QuadConfig {
    pub fn with_tol(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }
}

/// Value and error estimate of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, lo: f64, hi: f64) -> Panel {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for k in 0..7 {
        let dx = half * XGK[k];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[k] * pair;
        if k % 2 == 1 {
            gauss += WG[k / 2] * pair;
        }
    }
    let value = kronrod * half;
    let raw = ((kronrod - gauss) * half).abs();
    // QUADPACK-style pessimistic scaling of the Gauss/Kronrod difference.
    let error = if raw > 0.0 {
        let scaled = raw * (200.0 * raw / value.abs().max(f64::MIN_POSITIVE)).powf(1.5).min(1.0);
        scaled.max(50.0 * f64::EPSILON * value.abs())
    } else {
        0.0
    };
    Panel { lo, hi, value, error }
}

/// Integrates `f` over `[lo, hi]`, splitting additionally at the interior `breaks`.
pub fn integrate_with_breaks<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    breaks: &[f64],
    cfg: QuadConfig,
) -> Result<Quadrature> {
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(SpectralError::Domain(format!(
            "integration bounds must be finite, got [{lo}, {hi}]"
        )));
    }
    if lo == hi {
        return Ok(Quadrature {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    let (lo, hi, sign) = if lo < hi { (lo, hi, 1.0) } else { (hi, lo, -1.0) };

    let mut points: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|p| *p > lo && *p < hi)
        .collect();
    points.sort_by(f64::total_cmp);
    points.dedup();

    let mut heap = BinaryHeap::new();
    let mut left = lo;
    for p in points.into_iter().chain(std::iter::once(hi)) {
        heap.push(gk15(&mut f, left, p));
        left = p;
    }
    let mut evaluations = 15 * heap.len();

    loop {
        let value: f64 = heap.iter().map(|p| p.value).sum();
        let error: f64 = heap.iter().map(|p| p.error).sum();
        if error <= cfg.abs_tol.max(cfg.rel_tol * value.abs()) {
            return Ok(Quadrature {
                value: sign * value,
                error,
                evaluations,
            });
        }
        if heap.len() >= cfg.max_intervals {
            return Err(SpectralError::Quadrature {
                estimate: sign * value,
                error,
            });
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // Panel at floating-point resolution; accept what we have.
            heap.push(Panel {
                error: 0.0,
                ..worst
            });
            continue;
        }
        heap.push(gk15(&mut f, worst.lo, mid));
        heap.push(gk15(&mut f, mid, worst.hi));
        evaluations += 30;
    }
}

/// Integrates `f` over `[lo, hi]`.
pub fn integrate<F: FnMut(f64) -> f64>(f: F, lo: f64, hi: f64, cfg: QuadConfig) -> Result<Quadrature> {
    integrate_with_breaks(f, lo, hi, &[], cfg)
}

/// Integrates `f(x, y)` over a rectangle by nesting the 1D rule: the inner
/// integral over `y` is computed adaptively at every outer node in `x`.
pub fn integrate_rect<F: FnMut(f64, f64) -> f64>(
    mut f: F,
    x: (f64, f64),
    x_breaks: &[f64],
    y: (f64, f64),
    y_breaks: &[f64],
    cfg: QuadConfig,
) -> Result<Quadrature> {
    let inner_cfg = QuadConfig {
        // The absolute floor stays put: inner integrals that vanish up to
        // rounding can never meet a smaller one.
        abs_tol: cfg.abs_tol,
        rel_tol: (cfg.rel_tol * 1e-1).max(1e-14),
        max_intervals: cfg.max_intervals,
    };
    let mut failure: Option<SpectralError> = None;
    let mut inner_evals = 0usize;
    let outer = integrate_with_breaks(
        |xv| match integrate_with_breaks(|yv| f(xv, yv), y.0, y.1, y_breaks, inner_cfg) {
            Ok(q) => {
                inner_evals += q.evaluations;
                q.value
            }
            Err(e) => {
                if failure.is_none() {
                    failure = Some(e);
                }
                f64::NAN
            }
        },
        x.0,
        x.1,
        x_breaks,
        cfg,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let mut q = outer?;
    q.evaluations = inner_evals;
    Ok(q)
}
