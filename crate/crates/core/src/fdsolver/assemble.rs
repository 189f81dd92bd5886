//! Finite-volume assembly of the mode-`n` energy
//! `∫∫ (|∂_r u|² + |∂_z u|² + n²/r² |u|²) r dr dz` and mass `∫∫ |u|² r dr dz`.
//!
//! Every node owns the dual cell between the midpoints to its neighbours.
//! Edge differences are weighted by the dual-cell measure across the edge,
//! which makes the stiffness symmetric by construction and the mass
//! diagonal. Natural (Neumann) conditions need no extra rows: a boundary node
//! simply keeps its half cell. Dirichlet nodes are removed.

use super::mesh::{Mesh, RadialBoundary, ReducedProblem};
use crate::error::Result;

/// Compressed sparse row matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub cols: Vec<usize>,
    pub vals: Vec<f64>,
}

impl CsrMatrix {
    fn from_rows(rows: Vec<Vec<(usize, f64)>>) -> Self {
        let n = rows.len();
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for mut row in rows {
            row.sort_by_key(|e| e.0);
            let mut last: Option<usize> = None;
            for (c, v) in row {
                if last == Some(c) {
                    *vals.last_mut().expect("entry pushed") += v;
                } else {
                    cols.push(c);
                    vals.push(v);
                    last = Some(c);
                }
            }
            row_ptr.push(cols.len());
        }
        Self {
            n,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[span.clone()]
            .iter()
            .copied()
            .zip(self.vals[span].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.row(i).find(|e| e.0 == j).map_or(0.0, |e| e.1)
    }

    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).map(|(c, v)| v * x[c]).sum();
        }
    }

    /// Largest `|i - j|` over stored entries.
    pub fn half_bandwidth(&self) -> usize {
        (0..self.n)
            .flat_map(|i| self.row(i).map(move |(c, _)| c.abs_diff(i)))
            .max()
            .unwrap_or(0)
    }

    /// `max |A_ij - A_ji|`.
    pub fn asymmetry(&self) -> f64 {
        (0..self.n)
            .flat_map(|i| self.row(i).map(move |(c, v)| (i, c, v)))
            .map(|(i, c, v)| (v - self.get(c, i)).abs())
            .fold(0.0, f64::max)
    }
}

/// Numbering of the free (non-Dirichlet) nodes, radial index major.
#[derive(Debug, Clone, PartialEq)]
pub struct DofMap {
    nz_nodes: usize,
    index: Vec<Option<usize>>,
    nodes: Vec<(usize, usize)>,
}

impl DofMap {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn dof(&self, i: usize, j: usize) -> Option<usize> {
        self.index[i * self.nz_nodes + j]
    }

    /// Grid indices `(i, j)` of a degree of freedom.
    pub fn node(&self, dof: usize) -> (usize, usize) {
        self.nodes[dof]
    }
}

/// Stiffness `A`, diagonal mass `B` and the numbering they refer to.
#[derive(Debug, Clone)]
pub struct Assembled {
    pub stiffness: CsrMatrix,
    pub mass: Vec<f64>,
    pub dofs: DofMap,
}

impl Assembled {
    /// Samples `f(r, z)` at the free nodes.
    pub fn interpolate<F: Fn(f64, f64) -> f64>(&self, mesh: &Mesh, f: F) -> Vec<f64> {
        (0..self.dofs.len())
            .map(|k| {
                let (i, j) = self.dofs.node(k);
                f(mesh.r()[i], mesh.z()[j])
            })
            .collect()
    }

    /// `vᵀAv / vᵀBv`.
    pub fn rayleigh_quotient(&self, v: &[f64]) -> f64 {
        let mut av = vec![0.0; v.len()];
        self.stiffness.mul_vec(v, &mut av);
        let num: f64 = v.iter().zip(&av).map(|(x, y)| x * y).sum();
        let den: f64 = v.iter().zip(&self.mass).map(|(x, m)| m * x * x).sum();
        num / den
    }
}

fn dual_bounds(x: &[f64], i: usize) -> (f64, f64) {
    let lo = if i == 0 { x[0] } else { 0.5 * (x[i - 1] + x[i]) };
    let hi = if i + 1 == x.len() {
        x[i]
    } else {
        0.5 * (x[i] + x[i + 1])
    };
    (lo, hi)
}

fn is_dirichlet(p: &ReducedProblem, mesh: &Mesh, i: usize, j: usize) -> bool {
    let nr = mesh.nr();
    let nz = mesh.nz();
    if j == nz {
        return true;
    }
    if i == 0 && p.mode.get() >= 1 {
        return true;
    }
    if i == nr && p.outer == RadialBoundary::Dirichlet {
        return true;
    }
    if j == 0 {
        let a = p.geometry.a();
        // The node at r = a takes the Neumann condition.
        return match mesh.window_node() {
            Some(w) => i > w,
            None => a < p.radius() || a == 0.0,
        };
    }
    false
}

/// Assembles `(A, B)` for the reduced problem on a conforming mesh.
pub fn assemble(p: &ReducedProblem, mesh: &Mesh) -> Result<Assembled> {
    mesh.check(p)?;
    let (r, z) = (mesh.r(), mesh.z());
    let nz_nodes = z.len();

    let mut index = vec![None; r.len() * nz_nodes];
    let mut nodes = Vec::new();
    for i in 0..r.len() {
        for j in 0..nz_nodes {
            if !is_dirichlet(p, mesh, i, j) {
                index[i * nz_nodes + j] = Some(nodes.len());
                nodes.push((i, j));
            }
        }
    }
    let dofs = DofMap {
        nz_nodes,
        index,
        nodes,
    };

    let radial_measure: Vec<f64> = (0..r.len())
        .map(|i| {
            let (lo, hi) = dual_bounds(r, i);
            0.5 * (hi * hi - lo * lo)
        })
        .collect();
    let vertical_width: Vec<f64> = (0..nz_nodes)
        .map(|j| {
            let (lo, hi) = dual_bounds(z, j);
            hi - lo
        })
        .collect();

    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::with_capacity(5); dofs.len()];
    let mut add_edge = |p: Option<usize>, q: Option<usize>, c: f64| match (p, q) {
        (Some(p), Some(q)) => {
            rows[p].push((p, c));
            rows[q].push((q, c));
            rows[p].push((q, -c));
            rows[q].push((p, -c));
        }
        (Some(p), None) | (None, Some(p)) => rows[p].push((p, c)),
        (None, None) => {}
    };

    for i in 0..r.len() - 1 {
        let h = r[i + 1] - r[i];
        let r_mid = 0.5 * (r[i] + r[i + 1]);
        for (j, &w) in vertical_width.iter().enumerate() {
            add_edge(dofs.dof(i, j), dofs.dof(i + 1, j), r_mid / h * w);
        }
    }
    for (i, &rho) in radial_measure.iter().enumerate() {
        for j in 0..nz_nodes - 1 {
            let k = z[j + 1] - z[j];
            add_edge(dofs.dof(i, j), dofs.dof(i, j + 1), rho / k);
        }
    }

    let n2 = f64::from(p.mode.get()).powi(2);
    let mut mass = vec![0.0; dofs.len()];
    for (dof, &(i, j)) in dofs.nodes.iter().enumerate() {
        mass[dof] = radial_measure[i] * vertical_width[j];
        if n2 > 0.0 {
            let (lo, hi) = dual_bounds(r, i);
            rows[dof].push((dof, n2 * (hi - lo) / r[i] * vertical_width[j]));
        }
    }

    Ok(Assembled {
        stiffness: CsrMatrix::from_rows(rows),
        mass,
        dofs,
    })
}
