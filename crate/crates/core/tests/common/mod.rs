//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

/// `J_n(x) = (1/2π) ∫_0^{2π} cos(nt − x sin t) dt` by the trapezoidal rule,
/// which converges geometrically for this periodic analytic integrand.
pub fn bessel_j_quad(n: u32, x: f64) -> f64 {
    let m = 4 * (x.abs() as usize + n as usize) + 96;
    let h = 2.0 * PI / m as f64;
    let s: f64 = (0..m)
        .map(|k| {
            let t = k as f64 * h;
            (f64::from(n) * t - x * t.sin()).cos()
        })
        .sum();
    s / m as f64
}

pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Positive zeros of `J_n` below `bound`, by a fine sign-change scan.
pub fn zeros_scan(n: u32, bound: f64) -> Vec<f64> {
    let step = 0.02;
    let mut out = Vec::new();
    // j_{n,1} > n; below n the integrand sum is pure rounding noise for large n.
    let mut x = f64::from(n).max(step);
    let mut fx = bessel_j_quad(n, x);
    while x < bound {
        let y = x + step;
        let fy = bessel_j_quad(n, y);
        if fx != 0.0 && (fx < 0.0) != (fy < 0.0) {
            let z = bisect(|t| bessel_j_quad(n, t), x, y);
            if z < bound {
                out.push(z);
            }
        }
        x = y;
        fx = fy;
    }
    out
}

/// The `l`-th positive zero of `J_n`.
pub fn zero_scan(n: u32, l: usize) -> f64 {
    let mut bound = f64::from(n) + 4.0 * l as f64 + 8.0;
    loop {
        let zs = zeros_scan(n, bound);
        if zs.len() >= l {
            return zs[l - 1];
        }
        bound *= 1.5;
    }
}

/// All zeros of every order below `bound`, ascending; orders `n >= 1`
/// appear twice when `degenerate`.
pub fn all_zeros_scan(bound: f64, degenerate: bool) -> Vec<f64> {
    let mut out = Vec::new();
    // j_{n,1} > n, so orders up to `bound` suffice.
    for n in 0..=(bound as u32) {
        for z in zeros_scan(n, bound) {
            out.push(z);
            if degenerate && n >= 1 {
                out.push(z);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out
}
