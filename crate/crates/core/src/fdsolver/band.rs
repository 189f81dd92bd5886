//! Banded Cholesky factorization `M = L Lᵀ` for symmetric positive definite
//! matrices with half-bandwidth `m`. Row `i` of `L` is stored densely from
//! column `i - m` to `i`.

use super::assemble::CsrMatrix;
use crate::error::{Result, SpectralError};

#[derive(Debug, Clone)]
pub struct BandCholesky {
    n: usize,
    m: usize,
    data: Vec<f64>,
}

impl BandCholesky {
    /// Factors `A - shift·diag(mass)`.
    pub fn factor_shifted(a: &CsrMatrix, mass: &[f64], shift: f64) -> Result<Self> {
        let n = a.n;
        let m = a.half_bandwidth();
        let w = m + 1;
        let mut data = vec![0.0; n * w];
        // Scatter the lower triangle.
        for i in 0..n {
            for (j, v) in a.row(i) {
                if j <= i {
                    data[i * w + (j + m - i)] += v;
                }
            }
            data[i * w + m] -= shift * mass[i];
        }
        for i in 0..n {
            let first = i.saturating_sub(m);
            for j in first..=i {
                // Columns shared by rows i and j inside both bands.
                let k0 = first.max(j.saturating_sub(m));
                let ri = i * w + m - i;
                let rj = j * w + m - j;
                let dot: f64 = data[ri + k0..ri + j]
                    .iter()
                    .zip(&data[rj + k0..rj + j])
                    .map(|(x, y)| x * y)
                    .sum();
                let s = data[ri + j] - dot;
                if j == i {
                    if !(s > 0.0) {
                        return Err(SpectralError::Factorization(format!(
                            "non-positive pivot {s:e} at row {i} (shift {shift})"
                        )));
                    }
                    data[ri + i] = s.sqrt();
                } else {
                    data[ri + j] = s / data[rj + j];
                }
            }
        }
        Ok(Self { n, m, data })
    }

    /// Solves `L Lᵀ x = b` in place.
    pub fn solve_in_place(&self, x: &mut [f64]) {
        let (n, m, w) = (self.n, self.m, self.m + 1);
        for i in 0..n {
            let first = i.saturating_sub(m);
            let ri = i * w + m - i;
            let dot: f64 = self.data[ri + first..ri + i]
                .iter()
                .zip(&x[first..i])
                .map(|(l, v)| l * v)
                .sum();
            x[i] = (x[i] - dot) / self.data[ri + i];
        }
        for i in (0..n).rev() {
            let ri = i * w + m - i;
            x[i] /= self.data[ri + i];
            let xi = x[i];
            let first = i.saturating_sub(m);
            for (xk, l) in x[first..i].iter_mut().zip(&self.data[ri + first..ri + i]) {
                *xk -= l * xi;
            }
        }
    }
}
