use crate::bessel::BesselOrder;
use crate::error::{Result, SpectralError};
use crate::geometry::WaveguideGeometry;

/// Minimum number of intervals across the layer.
pub const MIN_NZ: usize = 16;

/// Condition imposed on the artificial boundary `r = R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum RadialBoundary {
    #[default]
    Dirichlet,
    Neumann,
}

/// The mode-`n` problem in `(r, z)` truncated at `r = R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedProblem {
    pub geometry: WaveguideGeometry,
    pub mode: BesselOrder,
    radius: f64,
    pub outer: RadialBoundary,
}

impl ReducedProblem {
    /// Far-field truncation factor: `R = a + FAR_FIELD * d`.
    pub const FAR_FIELD: f64 = 5.0;

    pub fn new(geometry: WaveguideGeometry, mode: BesselOrder) -> Self {
        Self {
            geometry,
            mode,
            radius: geometry.a() + Self::FAR_FIELD * geometry.d(),
            outer: RadialBoundary::Dirichlet,
        }
    }

    /// `R = a + factor·d`; the far-field rule requires `factor >= 5`.
    pub fn with_radius_factor(self, factor: f64) -> Result<Self> {
        if factor < Self::FAR_FIELD {
            return Err(SpectralError::Precondition(format!(
                "truncation factor {factor} is below the far-field rule R >= a + 5d"
            )));
        }
        self.with_radius(self.geometry.a() + factor * self.geometry.d())
    }

    /// Any positive truncation radius. Radii with `R <= a` put the whole
    /// bottom under the Neumann condition.
    pub fn with_radius(mut self, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(SpectralError::Precondition(format!(
                "truncation radius must be positive, got {radius}"
            )));
        }
        self.radius = radius;
        Ok(self)
    }

    pub fn with_outer(mut self, outer: RadialBoundary) -> Self {
        self.outer = outer;
        self
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn satisfies_far_field(&self) -> bool {
        self.radius >= self.geometry.a() + Self::FAR_FIELD * self.geometry.d() - 1e-12
    }

    /// Whether the Dirichlet–Neumann junction lies inside the truncated domain.
    pub fn has_junction(&self) -> bool {
        self.geometry.a() > 0.0 && self.geometry.a() < self.radius
    }
}

/// Tensor grid of nodes `r_0 = 0 < … < r_nr = R`, `z_0 = 0 < … < z_nz = d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    r: Vec<f64>,
    z: Vec<f64>,
    window_node: Option<usize>,
}

fn linspace(lo: f64, hi: f64, intervals: usize) -> impl Iterator<Item = f64> {
    (0..=intervals).map(move |k| {
        if k == intervals {
            hi
        } else {
            lo + (hi - lo) * (k as f64) / (intervals as f64)
        }
    })
}

impl Mesh {
    /// `nr` radial and `nz` vertical intervals, with a node exactly at `r = a`.
    ///
    /// The radial intervals are split between `[0, a]` and `[a, R]` in
    /// proportion to their lengths, each getting at least one.
    pub fn conforming(p: &ReducedProblem, nr: usize, nz: usize) -> Result<Self> {
        if nz < MIN_NZ {
            return Err(SpectralError::Precondition(format!(
                "nz = {nz} is below the minimum {MIN_NZ}"
            )));
        }
        if nr < 2 {
            return Err(SpectralError::Precondition(format!("nr = {nr} must be >= 2")));
        }
        let big_r = p.radius();
        let a = p.geometry.a();
        let (r, window_node) = if p.has_junction() {
            let inner = ((nr as f64) * a / big_r).round().clamp(1.0, (nr - 1) as f64) as usize;
            let mut r: Vec<f64> = linspace(0.0, a, inner).collect();
            r.extend(linspace(a, big_r, nr - inner).skip(1));
            (r, Some(inner))
        } else {
            (linspace(0.0, big_r, nr).collect(), None)
        };
        Ok(Self {
            r,
            z: linspace(0.0, p.geometry.d(), nz).collect(),
            window_node,
        })
    }

    /// Halves every spacing; all existing nodes are kept.
    pub fn refined(&self) -> Self {
        fn halve(x: &[f64]) -> Vec<f64> {
            let mut out = Vec::with_capacity(2 * x.len() - 1);
            for w in x.windows(2) {
                out.push(w[0]);
                out.push(0.5 * (w[0] + w[1]));
            }
            out.push(*x.last().expect("mesh has nodes"));
            out
        }
        Self {
            r: halve(&self.r),
            z: halve(&self.z),
            window_node: self.window_node.map(|i| 2 * i),
        }
    }

    pub fn r(&self) -> &[f64] {
        &self.r
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn nr(&self) -> usize {
        self.r.len() - 1
    }

    pub fn nz(&self) -> usize {
        self.z.len() - 1
    }

    /// Index of the node at `r = a`, when the junction is inside the domain.
    pub fn window_node(&self) -> Option<usize> {
        self.window_node
    }

    /// Largest spacing in either direction.
    pub fn h(&self) -> f64 {
        self.r
            .windows(2)
            .chain(self.z.windows(2))
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }

    pub(crate) fn check(&self, p: &ReducedProblem) -> Result<()> {
        let rel = |x: f64, y: f64| (x - y).abs() <= 1e-12 * y.abs().max(1.0);
        let last_r = *self.r.last().expect("mesh has nodes");
        let last_z = *self.z.last().expect("mesh has nodes");
        if !rel(last_r, p.radius()) {
            return Err(SpectralError::MeshMismatch(format!(
                "mesh ends at r = {last_r}, problem truncates at R = {}",
                p.radius()
            )));
        }
        if !rel(last_z, p.geometry.d()) {
            return Err(SpectralError::MeshMismatch(format!(
                "mesh ends at z = {last_z}, layer width is {}",
                p.geometry.d()
            )));
        }
        if p.has_junction() {
            match self.window_node {
                Some(i) if rel(self.r[i], p.geometry.a()) => {}
                _ => {
                    return Err(SpectralError::MeshMismatch(format!(
                        "no mesh node at the window edge r = {}",
                        p.geometry.a()
                    )))
                }
            }
        }
        if self.nz() < MIN_NZ {
            return Err(SpectralError::MeshMismatch(format!(
                "nz = {} is below the minimum {MIN_NZ}",
                self.nz()
            )));
        }
        Ok(())
    }
}
