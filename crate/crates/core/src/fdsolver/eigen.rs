//! Lowest eigenpairs of `A v = λ B v` (`B` diagonal positive) by
//! shift-invert subspace iteration with Rayleigh–Ritz projection.
//!
//! The iteration runs on `y = B^{1/2} v`, where the pencil becomes the
//! standard symmetric problem `C y = λ y` with `C = B^{-1/2} A B^{-1/2}` and
//! the shift-invert operator is `B^{1/2} (A - σB)^{-1} B^{1/2}`. The residual
//! `‖C y - λ y‖` with `‖y‖ = 1` is `‖Av - λBv‖` in the `B^{-1}` norm.

use nalgebra::{DMatrix, SymmetricEigen};

use super::assemble::Assembled;
use super::band::BandCholesky;
use crate::error::{Result, SpectralError};

/// Residual bound every returned pair satisfies.
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Iteration stops once all wanted residuals fall below this.
const TARGET_RESIDUAL: f64 = 1e-9;
const MAX_ITERATIONS: usize = 2000;
const EXTRA_VECTORS: usize = 4;

#[derive(Debug, Clone)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    pub residuals: Vec<f64>,
    /// `B`-normalized eigenvectors in degree-of-freedom numbering.
    pub vectors: Vec<Vec<f64>>,
    pub shift: f64,
    pub iterations: usize,
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Modified Gram–Schmidt, applied twice for stability. Returns false on
/// a (numerically) dependent block.
fn orthonormalize(block: &mut [Vec<f64>]) -> bool {
    for _ in 0..2 {
        for k in 0..block.len() {
            let (done, rest) = block.split_at_mut(k);
            let v = &mut rest[0];
            for q in done.iter() {
                let c = dot(q, v);
                v.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
            }
            let norm = dot(v, v).sqrt();
            if !(norm > 1e-300) {
                return false;
            }
            v.iter_mut().for_each(|x| *x /= norm);
        }
    }
    true
}

fn seed_block(n: usize, width: usize, sqrt_mass: &[f64]) -> Vec<Vec<f64>> {
    (0..width)
        .map(|k| {
            (0..n)
                .map(|i| {
                    // k = 0 is the all-ones vector; the rest are fixed oscillations.
                    let v = if k == 0 {
                        1.0
                    } else {
                        let t = (i as f64 + 0.5) / n as f64;
                        (std::f64::consts::PI * k as f64 * t * 7.31).cos() + 0.1 * (k as f64)
                    };
                    v * sqrt_mass[i]
                })
                .collect()
        })
        .collect()
}

/// Factors `A - σB`, lowering `σ` when it is not below the spectrum.
fn factor_below_spectrum(sys: &Assembled, shift: f64) -> Result<(BandCholesky, f64)> {
    let mut sigma = shift;
    let step = shift.abs().max(1.0) * 0.05;
    for _ in 0..40 {
        match BandCholesky::factor_shifted(&sys.stiffness, &sys.mass, sigma) {
            Ok(f) => return Ok((f, sigma)),
            Err(SpectralError::Factorization(_)) => sigma -= step,
            Err(e) => return Err(e),
        }
    }
    Err(SpectralError::Factorization(format!(
        "no positive definite shift found below {shift}"
    )))
}

/// The `count` smallest eigenpairs, computed with the shift `σ` (lowered if
/// `A - σB` is not positive definite).
pub fn lowest_eigenpairs(sys: &Assembled, count: usize, shift: f64) -> Result<EigenPairs> {
    let n = sys.dofs.len();
    if count == 0 || count > n {
        return Err(SpectralError::Precondition(format!(
            "requested {count} eigenpairs from a system of size {n}"
        )));
    }
    let width = (count + EXTRA_VECTORS).min(n);
    let sqrt_mass: Vec<f64> = sys.mass.iter().map(|b| b.sqrt()).collect();
    let (factor, sigma) = factor_below_spectrum(sys, shift)?;

    let apply_c = |y: &[f64], out: &mut [f64], tmp: &mut Vec<f64>| {
        tmp.clear();
        tmp.extend(y.iter().zip(&sqrt_mass).map(|(a, s)| a / s));
        sys.stiffness.mul_vec(tmp, out);
        out.iter_mut().zip(&sqrt_mass).for_each(|(o, s)| *o /= s);
    };

    let mut block = seed_block(n, width, &sqrt_mass);
    if !orthonormalize(&mut block) {
        return Err(SpectralError::Precondition("degenerate seed block".into()));
    }
    let mut c_block = vec![vec![0.0; n]; width];
    let mut tmp = Vec::with_capacity(n);
    let mut worst = f64::INFINITY;
    let mut previous = f64::INFINITY;

    for iteration in 1..=MAX_ITERATIONS {
        for y in block.iter_mut() {
            y.iter_mut().zip(&sqrt_mass).for_each(|(v, s)| *v *= s);
            factor.solve_in_place(y);
            y.iter_mut().zip(&sqrt_mass).for_each(|(v, s)| *v *= s);
        }
        if !orthonormalize(&mut block) {
            return Err(SpectralError::NoConvergence {
                iterations: iteration,
                residual: worst,
            });
        }

        for (y, cy) in block.iter().zip(c_block.iter_mut()) {
            apply_c(y, cy, &mut tmp);
        }
        let projected = DMatrix::from_fn(width, width, |i, j| {
            0.5 * (dot(&block[i], &c_block[j]) + dot(&block[j], &c_block[i]))
        });
        let eig = SymmetricEigen::new(projected);
        let mut order: Vec<usize> = (0..width).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));

        let rotate = |src: &[Vec<f64>]| -> Vec<Vec<f64>> {
            order
                .iter()
                .map(|&col| {
                    let mut out = vec![0.0; n];
                    for (k, v) in src.iter().enumerate() {
                        let c = eig.eigenvectors[(k, col)];
                        out.iter_mut().zip(v).for_each(|(o, x)| *o += c * x);
                    }
                    out
                })
                .collect()
        };
        block = rotate(&block);
        c_block = rotate(&c_block);
        let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();

        let residuals: Vec<f64> = (0..count)
            .map(|k| {
                block[k]
                    .iter()
                    .zip(&c_block[k])
                    .map(|(y, cy)| (cy - values[k] * y).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .collect();
        worst = residuals.iter().copied().fold(0.0, f64::max);
        // Below the contract but no longer improving: rounding floor reached.
        let stalled = worst <= RESIDUAL_TOL && worst > 0.95 * previous;
        previous = worst;

        if worst <= TARGET_RESIDUAL || stalled {
            let vectors = block[..count]
                .iter()
                .map(|y| y.iter().zip(&sqrt_mass).map(|(v, s)| v / s).collect())
                .collect();
            return Ok(EigenPairs {
                values: values[..count].to_vec(),
                residuals,
                vectors,
                shift: sigma,
                iterations: iteration,
            });
        }
    }
    Err(SpectralError::NoConvergence {
        iterations: MAX_ITERATIONS,
        residual: worst,
    })
}
