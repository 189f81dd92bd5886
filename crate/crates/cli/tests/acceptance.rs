//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use waveguide_core::bessel::asymptotic_zero;
use waveguide_core::bracketing::{uniqueness_threshold_report, REPORTED_UNIQUENESS_THRESHOLD};
use waveguide_core::fdsolver::{MeshDensity, RefinementStudy, RESIDUAL_TOL};
use waveguide_core::*;

const X01: f64 = 2.404_825_557_695_773;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

/// `J_n(x)` from the trapezoidal rule on its integral representation.
fn j_oracle(n: u32, x: f64) -> f64 {
    let m = 4 * (x as usize + n as usize) + 96;
    let h = 2.0 * PI / m as f64;
    (0..m)
        .map(|k| (f64::from(n) * k as f64 * h - x * (k as f64 * h).sin()).cos())
        .sum::<f64>()
        / m as f64
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) == (flo < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn waveguide(args: &[&str]) -> (i32, String, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_waveguide"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        o.status.code().unwrap_or(-1),
        String::from_utf8(o.stdout).unwrap(),
        String::from_utf8(o.stderr).unwrap(),
    )
}

fn ms(d: Duration) -> String {
    format!("{:.0} ms", d.as_secs_f64() * 1e3)
}

fn bessel_engine() -> Verdict {
    let start = Instant::now();
    let table: Vec<Vec<f64>> = (0..=6)
        .map(|n| (1..=21).map(|l| bessel_zero(BesselOrder::new(n), l).unwrap().value).collect())
        .collect();
    let elapsed = start.elapsed();
    let mut worst: f64 = 0.0;
    let mut interlaced = true;
    for n in 0..=5 {
        for l in 0..20 {
            let x = table[n][l];
            worst = worst.max(j_oracle(n as u32, x).abs());
            interlaced &= x < table[n + 1][l] && table[n + 1][l] < table[n][l + 1];
        }
    }
    verdict(
        worst <= 1e-12 && interlaced && elapsed < Duration::from_secs(1),
        format!("max |J_n(x)| = {worst:.1e}, interlacing {interlaced}, {}", ms(elapsed)),
    )
}

fn zero_count_estimate() -> Verdict {
    let start = Instant::now();
    let count = zeros_below(30.0, MultiplicityRule::Single).unwrap().len() as f64;
    let elapsed = start.elapsed();
    let estimate = 900.0 / (PI * PI);
    let rel = (count - estimate).abs() / estimate;
    verdict(
        rel <= 0.2 && elapsed < Duration::from_secs(1),
        format!("{count} zeros below 30 vs λ²/π² = {estimate:.2} (off by {:.1}%), {}", 100.0 * rel, ms(elapsed)),
    )
}

fn asymptotic_zeros() -> Verdict {
    let mut worst = (0.0, 0, 0);
    for n in 0..=3u32 {
        for l in 5..=20u32 {
            let x = bessel_zero(BesselOrder::new(n), l).unwrap().value;
            let rel = (asymptotic_zero(BesselOrder::new(n), l) - x).abs() / x;
            if rel > worst.0 {
                worst = (rel, n, l);
            }
        }
    }
    verdict(
        worst.0 < 0.01,
        format!(
            "worst relative error {:.3}% at n={}, l={} (first correction (4n²−1)/8β² exceeds 1% there)",
            100.0 * worst.0,
            worst.1,
            worst.2
        ),
    )
}

fn threshold() -> Verdict {
    let x11 = bisect(|x| j_oracle(1, x), 3.0, 4.5);
    let oracle = (2.0 * x11 / (3f64.sqrt() * PI)).powi(2);
    let report = uniqueness_threshold_report(MultiplicityRule::Single);
    let same_rule = uniqueness_threshold(MultiplicityRule::AngularDegeneracy) == report.derived;
    let pass = (report.derived - oracle).abs() < 1e-10
        && (report.derived - 1.9837).abs() < 1e-3
        && report.relative_discrepancy().abs() < 0.05
        && same_rule;
    verdict(
        pass,
        format!(
            "derived {:.6} (oracle {oracle:.6}), reported {REPORTED_UNIQUENESS_THRESHOLD}, discrepancy {:+.2}%, asymptotic-zero value {:.4}",
            report.derived,
            100.0 * report.relative_discrepancy(),
            report.from_asymptotic_zero
        ),
    )
}

fn counting_function() -> Verdict {
    let step = 0.1;
    let start = Instant::now();
    let (code, out, _) = waveguide(&["fig3", "--ratio-min", "0.1", "--ratio-max", "4.0", "--ratio-step", "0.1", "--mult", "single"]);
    let elapsed = start.elapsed();
    let rows: Vec<(f64, u64)> = out
        .lines()
        .skip(1)
        .map(|l| {
            let (r, c) = l.split_once(',').unwrap();
            (r.parse().unwrap(), c.parse().unwrap())
        })
        .collect();
    let monotone = rows.windows(2).all(|w| w[0].1 <= w[1].1);
    let first = rows.iter().find(|r| r.1 > 0).map_or(f64::NAN, |r| r.0);
    let expected = 2.0 * X01 / (3f64.sqrt() * PI);
    let at_one = rows.iter().find(|r| (r.0 - 1.0).abs() < 1e-9).map(|r| r.1);
    let pass = code == 0
        && rows.len() == 40
        && monotone
        && first >= expected
        && first - expected <= step
        && at_one == Some(1)
        && elapsed < Duration::from_secs(1);
    verdict(
        pass,
        format!(
            "{} rows, monotone {monotone}, first step at grid ratio {first} (exact {expected:.4}), count(1.0) = {at_one:?}, {}",
            rows.len(),
            ms(elapsed)
        ),
    )
}

fn certificates() -> Verdict {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut energies = Vec::new();
    for r in ["0.05", "0.1", "0.25", "0.5", "1", "2", "5"] {
        let (code, _, summary) = waveguide(&["certify", "--a", r, "--d", "1"]);
        let q = summary
            .split_whitespace()
            .find_map(|kv| kv.strip_prefix("q="))
            .and_then(|v| v.parse::<f64>().ok());
        match q {
            Some(q) if code == 0 && q < 0.0 => energies.push(format!("{r}:{q:.2e}")),
            _ => failures.push(r),
        }
    }
    let elapsed = start.elapsed();
    verdict(
        failures.is_empty() && elapsed < Duration::from_secs(10),
        format!("q[Φ] = {} failed {failures:?}, {}", energies.join(" "), ms(elapsed)),
    )
}

fn scaling_identity() -> Verdict {
    let profiles = [
        RadialProfile::new(1.5, 1.5, 3.0).unwrap(),
        RadialProfile::new(2.0, 2.4, 2.9).unwrap(),
        RadialProfile::new(6.0, 7.0, 16.0).unwrap(),
    ];
    let mut worst: f64 = 0.0;
    for base in profiles {
        let unweighted = base.unweighted_energy().unwrap();
        for tau in [1e-3, 1e-2, 1e-1, 1.0] {
            let weighted = tail_energy(&TailFamily::new(base, tau).unwrap()).unwrap();
            worst = worst.max((weighted - tau * unweighted).abs() / weighted);
        }
    }
    verdict(worst <= 1e-8, format!("worst relative deviation {worst:.1e} over 3 profiles × 4 τ"))
}

fn closed_form_oracle() -> Verdict {
    let mut rng = StdRng::seed_from_u64(20_251_018);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let d = rng.gen_range(0.5..2.0);
        let a = d * rng.gen_range(0.2..3.0);
        let g = WaveguideGeometry::new(d, a).unwrap();
        let b = a * rng.gen_range(1.05..2.0);
        let t0 = b + rng.gen_range(0.0..0.5) * d;
        let t1 = t0 + rng.gen_range(0.3..2.0) * d;
        let tau = 10f64.powf(rng.gen_range(-3.0..0.0));
        let tail = TailFamily::new(RadialProfile::new(b, t0, t1).unwrap(), tau).unwrap();
        let lo = a * rng.gen_range(0.05..0.5);
        let hi = lo + (0.95 * a - lo) * rng.gen_range(0.2..1.0);
        let eps = 10f64.powf(rng.gen_range(-3.0..0.7));
        let p = TrialParams::new(eps, tail, LocalizationBump::new(lo, hi).unwrap()).unwrap();
        let q = energy_quadrature(&g, &p).unwrap();
        let c = energy_closed_form(&g, &p).unwrap();
        worst = worst.max((q - c).abs() / (1.0 + q.abs()));
    }
    verdict(worst <= 1e-6, format!("worst |closed − quadrature|/(1+|q|) = {worst:.1e} over 20 random sets"))
}

fn unit_window_study() -> (RefinementStudy, Vec<f64>, Duration) {
    let p = ReducedProblem::new(WaveguideGeometry::new(1.0, 1.0).unwrap(), BesselOrder::new(0));
    let start = Instant::now();
    // 200×20 → 400×40 → 800×80; the finest level is the 800×80 mesh.
    let base = Mesh::conforming(&p, 200, 20).unwrap();
    let study = refine_study(&p, &base, 3).unwrap();
    let fine = solve_lowest(&p, &base.refined().refined(), 1).unwrap();
    (study, fine.residuals, start.elapsed())
}

fn solver_bracket(study: &RefinementStudy, residuals: &[f64], elapsed: Duration) -> Verdict {
    let fine = study.rows.last().unwrap();
    let lam = fine.lambda;
    let cap = PI * PI / 4.0 + X01 * X01 + 5.0 * study.error_estimate;
    let pass = (fine.nr, fine.nz) == (800, 80)
        && lam > PI * PI / 4.0
        && lam < PI * PI
        && lam <= cap
        && residuals.iter().all(|&r| r <= RESIDUAL_TOL)
        && elapsed < Duration::from_secs(60);
    verdict(
        pass,
        format!(
            "λ₁ = {lam:.6} on {}×{}, bound {cap:.4} (Richardson estimate {:.2e}), residual {:.1e}, {}",
            fine.nr,
            fine.nz,
            study.error_estimate,
            residuals[0],
            ms(elapsed)
        ),
    )
}

fn refinement(study: &RefinementStudy) -> Verdict {
    let g = WaveguideGeometry::new(1.0, 1.0).unwrap();
    let s = asymptotic_sandwich(&g, study.extrapolated);
    let inside = s.as_ref().is_ok_and(|s| s.lower <= study.extrapolated && study.extrapolated <= s.upper);
    verdict(
        study.order >= 1.0 && inside,
        format!(
            "observed order {:.3}, extrapolated λ₁ = {:.6} in sandwich {:?}",
            study.order,
            study.extrapolated,
            s.map(|s| (s.lower, s.upper)).ok()
        ),
    )
}

fn gap_asymptotics_check() -> Verdict {
    let start = Instant::now();
    let gs: Vec<_> = [2.0, 4.0, 8.0].iter().map(|&a| WaveguideGeometry::new(1.0, a).unwrap()).collect();
    let fine = gap_asymptotics(&gs, MeshDensity { nz: 64 }).unwrap();
    let coarse = gap_asymptotics(&gs, MeshDensity { nz: 32 }).unwrap();
    let elapsed = start.elapsed();
    let positive = fine.iter().all(|r| r.gap > 0.0);
    let decreasing = fine.windows(2).all(|w| w[1].gap < w[0].gap);
    let under = fine
        .iter()
        .zip(&coarse)
        .all(|(f, c)| f.gap <= f.bracket + (f.gap - c.gap).abs());
    let scaled_decreasing = fine.windows(2).all(|w| w[1].gap_a2 < w[0].gap_a2);
    let table: Vec<String> = fine
        .iter()
        .map(|r| format!("a={}: gap {:.5} ≤ {:.5}, gap·a² {:.4}", r.a, r.gap, r.bracket, r.gap_a2))
        .collect();
    verdict(
        positive && decreasing && under && scaled_decreasing && elapsed < Duration::from_secs(300),
        format!(
            "{}; positive {positive}, decreasing {decreasing}, under bracket {under}, gap·a² decreasing {scaled_decreasing}, {}",
            table.join("; "),
            ms(elapsed)
        ),
    )
}

fn main() {
    let (study, residuals, solve_time) = unit_window_study();
    let results = [
        ("bessel engine", bessel_engine()),
        ("zero count estimate", zero_count_estimate()),
        ("asymptotic zeros", asymptotic_zeros()),
        ("uniqueness threshold", threshold()),
        ("counting function", counting_function()),
        ("existence certificate", certificates()),
        ("tail scaling identity", scaling_identity()),
        ("closed form vs quadrature", closed_form_oracle()),
        ("solver vs bracket", solver_bracket(&study, &residuals, solve_time)),
        ("gap asymptotics", gap_asymptotics_check()),
        ("refinement study", refinement(&study)),
    ];
    let mut failed = 0;
    for (name, v) in &results {
        println!("{} {name}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        failed += usize::from(!v.pass);
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
