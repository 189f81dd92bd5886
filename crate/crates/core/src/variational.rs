//! Variational certificates for the existence of a bound state.
//!
//! For a trial function `Φ` in the form domain, a negative value of
//! `q[Φ] = ∫|∇Φ|² − (π/d)² ∫|Φ|²` proves that the operator has spectrum
//! below the continuum threshold, hence a discrete eigenvalue.
//!
//! The trial functions are axisymmetric,
//!
//! ```text
//! Φ(r, z) = φ_τ(r) · [ χ(z) + ε · j(r)² · η(z) ]
//! ```
//!
//! with `χ` the first transverse mode, `φ_τ` a logarithmically stretched
//! plateau, `j` a bump supported inside the window and
//! `η(z) = cos(πz/2d)`. The factor `η` keeps the window correction zero on
//! the Dirichlet plane `z = d` while leaving it free on the Neumann disc,
//! which is where the negative energy comes from:
//!
//! ```text
//! q = 2πτ‖φ'‖²  −  ε · 4π √(2/d) (π/d) ∫ j² r dr
//!               +  ε² · πd [ 4 ∫ j² j'² r dr − (3/4)(π/d)² ∫ j⁴ r dr ]
//! ```

use std::f64::consts::PI;

use crate::error::{Result, SpectralError};
use crate::geometry::WaveguideGeometry;
use crate::quadrature::{integrate, integrate_rect, integrate_with_breaks, QuadConfig};

fn mollifier(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

fn mollifier_derivative(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp() / (t * t)
    }
}

/// C^∞ step from 0 (t <= 0) to 1 (t >= 1), with its derivative.
fn smooth_step(t: f64) -> (f64, f64) {
    if t <= 0.0 {
        return (0.0, 0.0);
    }
    if t >= 1.0 {
        return (1.0, 0.0);
    }
    let (p, q) = (mollifier(t), mollifier(1.0 - t));
    let (dp, dq) = (mollifier_derivative(t), mollifier_derivative(1.0 - t));
    let s = p + q;
    (p / s, (dp * q + p * dq) / (s * s))
}

/// First transverse mode `χ(z) = √(2/d) sin(πz/d)` of the layer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransverseMode {
    pub d: f64,
}

impl TransverseMode {
    pub fn value(&self, z: f64) -> f64 {
        if z <= 0.0 || z >= self.d {
            return 0.0;
        }
        (2.0 / self.d).sqrt() * (PI * z / self.d).sin()
    }

    pub fn derivative(&self, z: f64) -> f64 {
        if z < 0.0 || z > self.d {
            return 0.0;
        }
        (2.0 / self.d).sqrt() * (PI / self.d) * (PI * z / self.d).cos()
    }

    /// `∫₀^d χ² dz`, computed by quadrature.
    pub fn norm_sq(&self) -> Result<f64> {
        Ok(integrate(|z| self.value(z).powi(2), 0.0, self.d, QuadConfig::default())?.value)
    }
}

/// Smooth radial profile with `φ = 1` on `[0, plateau_end]` that decays to
/// zero across `[transition_start, transition_end]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialProfile {
    plateau_end: f64,
    transition_start: f64,
    transition_end: f64,
}

impl RadialProfile {
    pub fn new(plateau_end: f64, transition_start: f64, transition_end: f64) -> Result<Self> {
        if !(plateau_end > 0.0) {
            return Err(SpectralError::MalformedProfile(format!(
                "plateau end must be positive, got {plateau_end}"
            )));
        }
        if transition_start < plateau_end {
            return Err(SpectralError::MalformedProfile(format!(
                "profile varies at s = {transition_start} inside the plateau [0, {plateau_end}]"
            )));
        }
        if !(transition_end > transition_start) || !transition_end.is_finite() {
            return Err(SpectralError::MalformedProfile(format!(
                "empty or unbounded transition [{transition_start}, {transition_end}]"
            )));
        }
        Ok(Self {
            plateau_end,
            transition_start,
            transition_end,
        })
    }

    /// Plateau up to `b = max(2a, a + d)`, decaying across `[b, 2b]`.
    pub fn canonical(g: &WaveguideGeometry) -> Self {
        let b = (2.0 * g.a()).max(g.a() + g.d());
        Self {
            plateau_end: b,
            transition_start: b,
            transition_end: 2.0 * b,
        }
    }

    pub fn plateau_end(&self) -> f64 {
        self.plateau_end
    }

    pub fn transition(&self) -> (f64, f64) {
        (self.transition_start, self.transition_end)
    }

    fn step_arg(&self, s: f64) -> f64 {
        (s - self.transition_start) / (self.transition_end - self.transition_start)
    }

    pub fn value(&self, s: f64) -> f64 {
        1.0 - smooth_step(self.step_arg(s)).0
    }

    pub fn derivative(&self, s: f64) -> f64 {
        -smooth_step(self.step_arg(s)).1 / (self.transition_end - self.transition_start)
    }

    /// `‖φ'‖²` in `L²((0, ∞), ds)`.
    pub fn unweighted_energy(&self) -> Result<f64> {
        Ok(integrate(
            |s| self.derivative(s).powi(2),
            self.transition_start,
            self.transition_end,
            QuadConfig::default(),
        )?
        .value)
    }
}

/// `φ_τ(r) = φ(r)` for `r < b` and `φ(b + τ ln(r/b))` beyond.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailFamily {
    pub base: RadialProfile,
    tau: f64,
}

impl TailFamily {
    pub fn new(base: RadialProfile, tau: f64) -> Result<Self> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(SpectralError::Precondition(format!(
                "tail stretch tau must be positive, got {tau}"
            )));
        }
        Ok(Self { base, tau })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn with_tau(&self, tau: f64) -> Result<Self> {
        Self::new(self.base, tau)
    }

    fn stretched(&self, r: f64) -> f64 {
        let b = self.base.plateau_end;
        b + self.tau * (r / b).ln()
    }

    pub fn value(&self, r: f64) -> f64 {
        if r < self.base.plateau_end {
            self.base.value(r)
        } else {
            self.base.value(self.stretched(r))
        }
    }

    pub fn derivative(&self, r: f64) -> f64 {
        if r < self.base.plateau_end {
            self.base.derivative(r)
        } else {
            self.tau / r * self.base.derivative(self.stretched(r))
        }
    }

    /// `ln r` at which the stretched profile reaches the stretched coordinate `s`.
    fn log_radius_at(&self, s: f64) -> f64 {
        let b = self.base.plateau_end;
        b.ln() + (s - b) / self.tau
    }

    /// Radius beyond which `φ_τ ≡ 0`; infinite when it overflows.
    pub fn support_radius(&self) -> f64 {
        self.log_radius_at(self.base.transition_end).exp()
    }
}

/// Above this radius the weighted tail integral switches to log-radius form.
const DIRECT_TAIL_MAX_RADIUS: f64 = 1e100;

/// `‖φ_τ'‖²` in `L²((0, ∞), r dr)`.
///
/// While the support of `φ_τ'` fits in floating point, the weighted integral
/// is taken directly in `r` on log-spaced panels. Otherwise it is taken in
/// `t = ln r`, where the integrand `(r φ_τ'(r))²` stays bounded.
pub fn tail_energy(tail: &TailFamily) -> Result<f64> {
    let (s0, s1) = tail.base.transition();
    let t0 = tail.log_radius_at(s0);
    let t1 = tail.log_radius_at(s1);
    let panels = 64;
    let cfg = QuadConfig::with_tol(1e-300, 1e-12);
    if t1.exp() <= DIRECT_TAIL_MAX_RADIUS {
        let breaks: Vec<f64> = (1..panels)
            .map(|k| (t0 + (t1 - t0) * f64::from(k) / f64::from(panels)).exp())
            .collect();
        let q = integrate_with_breaks(
            |r| tail.derivative(r).powi(2) * r,
            t0.exp(),
            t1.exp(),
            &breaks,
            cfg,
        )?;
        Ok(q.value)
    } else {
        let b = tail.base.plateau_end;
        let q = integrate(
            |t| {
                // r φ_τ'(r) at r = e^t, without forming r.
                let flux = tail.tau * tail.base.derivative(b + tail.tau * (t - b.ln()));
                flux * flux
            },
            t0,
            t1,
            cfg,
        )?;
        Ok(q.value)
    }
}

/// Bump `j(r) = exp(-1/(1 - s²))` with `s` the affine image of `(lo, hi)` on `(-1, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalizationBump {
    lo: f64,
    hi: f64,
}

impl LocalizationBump {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo > 0.0 && hi > lo) {
            return Err(SpectralError::Precondition(format!(
                "bump support ({lo}, {hi}) must satisfy 0 < lo < hi"
            )));
        }
        Ok(Self { lo, hi })
    }

    /// Support `(a/4, 3a/4)`.
    pub fn canonical(a: f64) -> Result<Self> {
        Self::new(0.25 * a, 0.75 * a)
    }

    pub fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    fn local(&self, r: f64) -> f64 {
        (2.0 * r - (self.lo + self.hi)) / (self.hi - self.lo)
    }

    pub fn value(&self, r: f64) -> f64 {
        let s = self.local(r);
        if s.abs() >= 1.0 {
            return 0.0;
        }
        (-1.0 / (1.0 - s * s)).exp()
    }

    pub fn derivative(&self, r: f64) -> f64 {
        let s = self.local(r);
        if s.abs() >= 1.0 {
            return 0.0;
        }
        let w = 1.0 - s * s;
        (-1.0 / w).exp() * (-2.0 * s / (w * w)) * (2.0 / (self.hi - self.lo))
    }

    fn check_inside(&self, g: &WaveguideGeometry) -> Result<()> {
        if self.hi >= g.a() {
            return Err(SpectralError::DegenerateGeometry(format!(
                "bump support ({}, {}) is not inside the window (0, {})",
                self.lo,
                self.hi,
                g.a()
            )));
        }
        Ok(())
    }

    fn weighted_integral<F: Fn(f64) -> f64>(&self, f: F) -> Result<f64> {
        let cfg = QuadConfig::with_tol(1e-300, 1e-13);
        Ok(integrate(|r| f(r) * r, self.lo, self.hi, cfg)?.value)
    }
}

/// Parameters of the trial function `Φ_{τ,ε}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialParams {
    pub epsilon: f64,
    pub tail: TailFamily,
    pub bump: LocalizationBump,
}

impl TrialParams {
    pub fn new(epsilon: f64, tail: TailFamily, bump: LocalizationBump) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(SpectralError::Precondition(format!(
                "epsilon must be positive, got {epsilon}"
            )));
        }
        Ok(Self {
            epsilon,
            tail,
            bump,
        })
    }

    pub fn tau(&self) -> f64 {
        self.tail.tau()
    }

    fn check(&self, g: &WaveguideGeometry) -> Result<()> {
        self.bump.check_inside(g)?;
        if self.tail.base.plateau_end() <= g.a() {
            return Err(SpectralError::DegenerateGeometry(format!(
                "plateau end {} must exceed the window radius {}",
                self.tail.base.plateau_end(),
                g.a()
            )));
        }
        Ok(())
    }

    /// `Φ(r, z)` together with `∂_r Φ` and `∂_z Φ`.
    pub fn evaluate(&self, g: &WaveguideGeometry, r: f64, z: f64) -> (f64, f64, f64) {
        let chi = TransverseMode { d: g.d() };
        let k = PI / (2.0 * g.d());
        let (eta, deta) = ((k * z).cos(), -k * (k * z).sin());
        let (phi, dphi) = (self.tail.value(r), self.tail.derivative(r));
        let (j, dj) = (self.bump.value(r), self.bump.derivative(r));
        let eps = self.epsilon;
        let inner = chi.value(z) + eps * j * j * eta;
        let value = phi * inner;
        let dr = dphi * inner + phi * 2.0 * eps * j * dj * eta;
        let dz = phi * (chi.derivative(z) + eps * j * j * deta);
        (value, dr, dz)
    }
}

/// Coefficients of `q = tail_term + linear·ε + quadratic·ε²` for fixed profiles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyCoefficients {
    /// `2πτ‖φ'‖²` in `L²(ds)`.
    pub tail_term: f64,
    pub linear: f64,
    pub quadratic: f64,
}

impl EnergyCoefficients {
    pub fn energy(&self, epsilon: f64) -> f64 {
        self.tail_term + self.linear * epsilon + self.quadratic * epsilon * epsilon
    }
}

struct BumpNorms {
    j2_weighted: f64,
    jj_prime_weighted: f64,
    j4_weighted: f64,
    j4_unweighted: f64,
}

fn bump_norms(bump: &LocalizationBump) -> Result<BumpNorms> {
    let (lo, hi) = bump.support();
    Ok(BumpNorms {
        j2_weighted: bump.weighted_integral(|r| bump.value(r).powi(2))?,
        jj_prime_weighted: bump.weighted_integral(|r| (bump.value(r) * bump.derivative(r)).powi(2))?,
        j4_weighted: bump.weighted_integral(|r| bump.value(r).powi(4))?,
        j4_unweighted: integrate(|r| bump.value(r).powi(4), lo, hi, QuadConfig::default())?.value,
    })
}

/// Reduced closed form of `q[Φ]`, every norm computed by 1D quadrature.
pub fn energy_coefficients(g: &WaveguideGeometry, p: &TrialParams) -> Result<EnergyCoefficients> {
    p.check(g)?;
    let d = g.d();
    let k2 = g.continuum_threshold();
    let norms = bump_norms(&p.bump)?;
    Ok(EnergyCoefficients {
        tail_term: 2.0 * PI * p.tau() * p.tail.base.unweighted_energy()?,
        linear: -4.0 * PI * (2.0 / d).sqrt() * (PI / d) * norms.j2_weighted,
        quadratic: PI * d * (4.0 * norms.jj_prime_weighted - 0.75 * k2 * norms.j4_weighted),
    })
}

pub fn energy_closed_form(g: &WaveguideGeometry, p: &TrialParams) -> Result<f64> {
    Ok(energy_coefficients(g, p)?.energy(p.epsilon))
}

/// Coefficients as they appear in the published reduced formula, whose linear
/// term is `-8πd ε ∫ j⁴ ds` and quadratic term `2πε² (2‖jj'‖² − (π/d)²‖j²‖²)`.
/// Kept for comparison only; it disagrees with the direct evaluation of `q`.
pub fn printed_energy_coefficients(
    g: &WaveguideGeometry,
    p: &TrialParams,
) -> Result<EnergyCoefficients> {
    p.check(g)?;
    let d = g.d();
    let norms = bump_norms(&p.bump)?;
    Ok(EnergyCoefficients {
        tail_term: 2.0 * PI * p.tau() * p.tail.base.unweighted_energy()?,
        linear: -8.0 * PI * d * norms.j4_unweighted,
        quadratic: 2.0
            * PI
            * (2.0 * norms.jj_prime_weighted - g.continuum_threshold() * norms.j4_weighted),
    })
}

/// `q[Φ] = ∫|∇Φ|² − (π/d)²∫|Φ|²` over the layer by direct quadrature.
///
/// On `r < b` the full integrand is integrated in `(r, z)`. On `r >= b` the
/// trial function is `φ_τ(r) χ(z)`, the `z`-terms cancel because `χ` is the
/// normalized transverse mode, and what remains is `‖χ‖² · ‖φ_τ'‖²_{r dr}`.
pub fn energy_quadrature(g: &WaveguideGeometry, p: &TrialParams) -> Result<f64> {
    p.check(g)?;
    let b = p.tail.base.plateau_end();
    let (lo, hi) = p.bump.support();
    let k2 = g.continuum_threshold();
    let cfg = QuadConfig::with_tol(1e-13, 1e-11);
    let inner = integrate_rect(
        |r, z| {
            let (v, dr, dz) = p.evaluate(g, r, z);
            (dr * dr + dz * dz - k2 * v * v) * r
        },
        (0.0, b),
        &[lo, hi, g.a()],
        (0.0, g.d()),
        &[],
        cfg,
    )?;
    let chi = TransverseMode { d: g.d() };
    let tail = chi.norm_sq()? * tail_energy(&p.tail)?;
    Ok(2.0 * PI * (inner.value + tail))
}

/// One step of the certificate search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchStep {
    pub tau: f64,
    pub epsilon: f64,
    pub closed_form: f64,
    pub quadrature: f64,
}

/// Trial parameters with a verified negative energy.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub params: TrialParams,
    /// `q[Φ]` by direct quadrature.
    pub energy: f64,
    pub closed_form: f64,
    /// Required negativity margin `δ`.
    pub required_margin: f64,
    pub trace: Vec<SearchStep>,
}

impl Certificate {
    pub fn margin(&self) -> f64 {
        -self.energy
    }
}

/// Geometric shrink factor for `τ`.
pub const TAU_SHRINK: f64 = 0.25;
const MAX_SEARCH_STEPS: usize = 200;

/// Searches for `Φ_{τ,ε}` with `q[Φ] < -δ`, `δ = 1e-8 (π/d)²`.
///
/// With the canonical profiles fixed, `ε = -linear / (2 quadratic)` minimizes
/// the `ε`-part of `q`; `τ` then shrinks geometrically from 1 until the tail
/// cost is paid for.
pub fn certify_bound_state(g: &WaveguideGeometry) -> Result<Certificate> {
    if !(g.a() > 0.0) {
        return Err(SpectralError::Precondition(
            "a certificate needs a window of positive radius".into(),
        ));
    }
    certify_with_profiles(g, RadialProfile::canonical(g), LocalizationBump::canonical(g.a())?)
}

/// The same search with caller-chosen profiles.
pub fn certify_with_profiles(
    g: &WaveguideGeometry,
    base: RadialProfile,
    bump: LocalizationBump,
) -> Result<Certificate> {
    if !(g.a() > 0.0) {
        return Err(SpectralError::Precondition(
            "a certificate needs a window of positive radius".into(),
        ));
    }
    let delta = 1e-8 * g.continuum_threshold();
    let probe = TrialParams::new(1.0, TailFamily::new(base, 1.0)?, bump)?;
    let coeffs = energy_coefficients(g, &probe)?;
    let epsilon = if coeffs.quadratic > 0.0 {
        -coeffs.linear / (2.0 * coeffs.quadratic)
    } else {
        1.0
    };

    let mut trace = Vec::new();
    let mut best = f64::INFINITY;
    let mut tau = 1.0;
    for _ in 0..MAX_SEARCH_STEPS {
        let params = TrialParams::new(epsilon, TailFamily::new(base, tau)?, bump)?;
        let quadrature = energy_quadrature(g, &params)?;
        let closed_form = energy_closed_form(g, &params)?;
        trace.push(SearchStep {
            tau,
            epsilon,
            closed_form,
            quadrature,
        });
        best = best.min(quadrature);
        if quadrature < -delta {
            return Ok(Certificate {
                params,
                energy: quadrature,
                closed_form,
                required_margin: delta,
                trace,
            });
        }
        tau *= TAU_SHRINK;
    }
    Err(SpectralError::NoCertificate { best })
}
