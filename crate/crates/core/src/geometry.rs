use std::f64::consts::PI;

use crate::error::{Result, SpectralError};

/// Layer of width `d` whose bottom carries a Neumann disc of radius `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveguideGeometry {
    d: f64,
    a: f64,
}

impl WaveguideGeometry {
    pub fn new(d: f64, a: f64) -> Result<Self> {
        if !(d > 0.0) || !d.is_finite() {
            return Err(SpectralError::Precondition(format!(
                "layer width d must be positive and finite, got {d}"
            )));
        }
        if !(a >= 0.0) || !a.is_finite() {
            return Err(SpectralError::Precondition(format!(
                "window radius a must be non-negative and finite, got {a}"
            )));
        }
        Ok(Self { d, a })
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// Window radius in units of the layer width.
    pub fn ratio(&self) -> f64 {
        self.a / self.d
    }

    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(self.d * s, self.a * s)
    }

    /// Bottom of the essential spectrum, `(π/d)²`.
    pub fn continuum_threshold(&self) -> f64 {
        (PI / self.d).powi(2)
    }

    /// Transverse ground energy of the Dirichlet–Neumann slab, `(π/2d)²`.
    pub fn transverse_ground(&self) -> f64 {
        (PI / (2.0 * self.d)).powi(2)
    }

    /// `((2k+1)π/2d)²`, the `k`-th transverse level of the inner cylinder.
    pub fn transverse_level(&self, k: u32) -> f64 {
        (f64::from(2 * k + 1) * PI / (2.0 * self.d)).powi(2)
    }
}

/// The interval `[(π/2d)², (π/d)²]` that holds the discrete spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralWindow {
    pub lower: f64,
    pub upper: f64,
}

impl SpectralWindow {
    pub fn contains_open(&self, energy: f64) -> bool {
        energy > self.lower && energy < self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}
