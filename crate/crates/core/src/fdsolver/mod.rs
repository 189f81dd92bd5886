//! Discrete eigenvalues of the full operator, one angular mode at a time.
//!
//! Writing `u(r, θ, z) = v(r, z) e^{inθ}` reduces the problem to the
//! half-strip `0 < r < R`, `0 < z < d` with weight `r` and the centrifugal
//! term `n²/r²`. Conditions: Dirichlet on `z = d`, on `z = 0` for `r > a` and
//! on `r = R` (or Neumann there, to bracket the truncation from the other
//! side); Neumann on the window `z = 0, r <= a`; on the axis natural for
//! `n = 0` and Dirichlet for `n >= 1`.

mod assemble;
mod band;
mod eigen;
mod mesh;

pub use assemble::{assemble, Assembled, CsrMatrix, DofMap};
pub use band::BandCholesky;
pub use eigen::{lowest_eigenpairs, EigenPairs, RESIDUAL_TOL};
pub use mesh::{Mesh, RadialBoundary, ReducedProblem, MIN_NZ};

use crate::bessel::{bessel_zero, BesselOrder};
use crate::error::{Result, SpectralError};
use crate::geometry::WaveguideGeometry;

/// Lowest eigenvalues of one reduced problem on one mesh.
#[derive(Debug, Clone)]
pub struct EigenResult {
    pub mode: BesselOrder,
    pub eigenvalues: Vec<f64>,
    pub residuals: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub outer: RadialBoundary,
    pub nr: usize,
    pub nz: usize,
    pub h: f64,
    pub radius: f64,
    pub shift: f64,
    pub iterations: usize,
    /// Bottom of the essential spectrum, `(π/d)²`.
    pub threshold: f64,
}

impl EigenResult {
    /// Eigenvalues strictly below the continuum threshold.
    pub fn bound_states(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.eigenvalues
            .iter()
            .copied()
            .enumerate()
            .filter(|(_, l)| *l < self.threshold)
    }

    pub fn lowest(&self) -> f64 {
        self.eigenvalues[0]
    }
}

/// Lowest `count` eigenvalues of the mode problem, shift-inverted about `(π/2d)²`.
pub fn solve_lowest(p: &ReducedProblem, mesh: &Mesh, count: usize) -> Result<EigenResult> {
    let sys = assemble(p, mesh)?;
    let pairs = lowest_eigenpairs(&sys, count, p.geometry.transverse_ground())?;
    Ok(EigenResult {
        mode: p.mode,
        eigenvalues: pairs.values,
        residuals: pairs.residuals,
        vectors: pairs.vectors,
        outer: p.outer,
        nr: mesh.nr(),
        nz: mesh.nz(),
        h: mesh.h(),
        radius: p.radius(),
        shift: pairs.shift,
        iterations: pairs.iterations,
        threshold: p.geometry.continuum_threshold(),
    })
}

/// Resolution of a mesh family: `nz` intervals across the layer and the
/// same spacing (as close as possible) in `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeshDensity {
    pub nz: usize,
}

impl MeshDensity {
    pub fn mesh(&self, p: &ReducedProblem) -> Result<Mesh> {
        let per_unit = self.nz as f64 / p.geometry.d();
        let nr = (p.radius() * per_unit).round().max(2.0) as usize;
        Mesh::conforming(p, nr, self.nz)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefinementRow {
    pub h: f64,
    pub nr: usize,
    pub nz: usize,
    pub lambda: f64,
    /// `log2` of the ratio of successive differences; needs three levels.
    pub order: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefinementStudy {
    pub rows: Vec<RefinementRow>,
    /// Observed order from the three finest levels.
    pub order: f64,
    /// Richardson-extrapolated `λ₁`.
    pub extrapolated: f64,
    /// `|λ_fine − λ_extrapolated|`.
    pub error_estimate: f64,
}

/// Solves on `base` and `levels - 1` successive halvings and estimates the
/// convergence order of `λ₁` by Richardson's method.
pub fn refine_study(p: &ReducedProblem, base: &Mesh, levels: usize) -> Result<RefinementStudy> {
    if levels < 3 {
        return Err(SpectralError::Precondition(format!(
            "a refinement study needs at least 3 levels, got {levels}"
        )));
    }
    let mut rows: Vec<RefinementRow> = Vec::with_capacity(levels);
    let mut mesh = base.clone();
    for level in 0..levels {
        if level > 0 {
            mesh = mesh.refined();
        }
        let lambda = solve_lowest(p, &mesh, 1)?.lowest();
        let order = if level >= 2 {
            let d1 = rows[level - 2].lambda - rows[level - 1].lambda;
            let d2 = rows[level - 1].lambda - lambda;
            Some((d1 / d2).abs().log2())
        } else {
            None
        };
        rows.push(RefinementRow {
            h: mesh.h(),
            nr: mesh.nr(),
            nz: mesh.nz(),
            lambda,
            order,
        });
    }
    let k = rows.len();
    let order = rows[k - 1].order.expect("three levels computed");
    let fine = rows[k - 1].lambda;
    let correction = (fine - rows[k - 2].lambda) / (2f64.powf(order) - 1.0);
    Ok(RefinementStudy {
        rows,
        order,
        extrapolated: fine + correction,
        error_estimate: correction.abs(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapRow {
    pub a: f64,
    pub lambda: f64,
    /// `λ₁ − (π/2d)²`.
    pub gap: f64,
    pub gap_a2: f64,
    /// Dirichlet bracket `(x_{0,1}/a)²`.
    pub bracket: f64,
}

/// `λ₁` of mode 0 for windows of growing radius at fixed `d`.
pub fn gap_asymptotics(geometries: &[WaveguideGeometry], density: MeshDensity) -> Result<Vec<GapRow>> {
    if let Some(first) = geometries.first() {
        if geometries.iter().any(|g| g.d() != first.d()) {
            return Err(SpectralError::Precondition(
                "gap asymptotics needs a fixed layer width".into(),
            ));
        }
    }
    if geometries.windows(2).any(|w| w[1].a() <= w[0].a()) || geometries.iter().any(|g| g.a() <= 0.0) {
        return Err(SpectralError::Precondition(
            "window radii must be positive and ascending".into(),
        ));
    }
    geometries
        .iter()
        .map(|g| {
            let p = ReducedProblem::new(*g, BesselOrder::new(0));
            let lambda = solve_lowest(&p, &density.mesh(&p)?, 1)?.lowest();
            let gap = lambda - g.transverse_ground();
            let x01 = bessel_zero(BesselOrder::new(0), 1)?.value;
            Ok(GapRow {
                a: g.a(),
                lambda,
                gap,
                gap_a2: gap * g.a() * g.a(),
                bracket: (x01 / g.a()).powi(2),
            })
        })
        .collect()
}
