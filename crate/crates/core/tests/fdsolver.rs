mod common;

use std::f64::consts::PI;

use common::zero_scan;
use waveguide_core::fdsolver::{MeshDensity, RESIDUAL_TOL};
use waveguide_core::*;

const X01: f64 = 2.404_825_557_695_773;
const QUARTER: f64 = PI * PI / 4.0;

fn geom(d: f64, a: f64) -> WaveguideGeometry {
    WaveguideGeometry::new(d, a).unwrap()
}

fn mode(n: u32) -> BesselOrder {
    BesselOrder::new(n)
}

fn lowest(p: &ReducedProblem, nz: usize) -> f64 {
    let m = MeshDensity { nz }.mesh(p).unwrap();
    solve_lowest(p, &m, 1).unwrap().lowest()
}

#[test]
fn separable_box_converges_at_second_order() {
    // Whole bottom Neumann (a >= R), Dirichlet at r = R: the mode-n ground
    // state is cos(πz/2d) J_n(x_{n,1} r/R) with energy (π/2d)² + (x_{n,1}/R)².
    for n in [0, 1, 2] {
        let p = ReducedProblem::new(geom(1.0, 10.0), mode(n)).with_radius(3.0).unwrap();
        let want = QUARTER + (zero_scan(n, 1) / 3.0).powi(2);
        let errs: Vec<f64> = [16, 32, 64].iter().map(|&nz| (lowest(&p, nz) - want).abs()).collect();
        assert!(errs[2] < 2e-3, "n={n}: {errs:?}");
        let order = (errs[1] / errs[2]).log2();
        assert!((1.8..2.2).contains(&order), "n={n}: order {order}");
    }
}

#[test]
fn closed_window_has_no_state_below_continuum() {
    let p = ReducedProblem::new(geom(1.0, 0.0), mode(0));
    let want = PI * PI + (X01 / p.radius()).powi(2);
    let mut prev = f64::INFINITY;
    for nz in [16, 32, 64] {
        let l = lowest(&p, nz);
        let h = 1.0 / nz as f64;
        assert!(l >= PI * PI - 10.0 * h * h, "nz={nz}: {l}");
        let err = (l - want).abs();
        assert!(err < prev);
        prev = err;
    }
    assert!(prev < 1e-2);
}

#[test]
fn full_neumann_bottom_reaches_transverse_ground() {
    let p = ReducedProblem::new(geom(1.0, 10.0), mode(0))
        .with_radius(5.0)
        .unwrap()
        .with_outer(RadialBoundary::Neumann);
    for nz in [16, 32] {
        let l = lowest(&p, nz);
        let h = 1.0 / nz as f64;
        assert!((l - QUARTER).abs() < 2.0 * h * h, "nz={nz}: {l}");
    }
}

#[test]
fn unit_window_ground_state_sits_under_bracket() {
    let g = geom(1.0, 1.0);
    let p = ReducedProblem::new(g, mode(0));
    let r = solve_lowest(&p, &MeshDensity { nz: 32 }.mesh(&p).unwrap(), 3).unwrap();
    let bound: Vec<_> = r.bound_states().collect();
    assert_eq!(bound.len(), 1);
    let l = r.lowest();
    assert!(l > QUARTER && l < PI * PI);
    assert!(l <= QUARTER + X01 * X01);
    assert!(r.residuals.iter().all(|&x| x <= RESIDUAL_TOL));
    assert!(r.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn wide_window_gap_below_bracket() {
    let p = ReducedProblem::new(geom(1.0, 4.0), mode(0));
    let gap = lowest(&p, 16) - QUARTER;
    assert!(gap > 0.0 && gap <= (X01 / 4.0).powi(2));
}

#[test]
fn high_angular_mode_has_no_bound_state() {
    let p = ReducedProblem::new(geom(1.0, 1.0), mode(3));
    let r = solve_lowest(&p, &MeshDensity { nz: 32 }.mesh(&p).unwrap(), 2).unwrap();
    assert_eq!(r.bound_states().count(), 0);
    assert!(r.lowest() > PI * PI);
}

#[test]
fn truncation_radius_does_not_matter() {
    let g = geom(1.0, 1.0);
    let near = ReducedProblem::new(g, mode(0));
    let far = near.with_radius_factor(8.0).unwrap();
    let shift = (lowest(&near, 16) - lowest(&far, 16)).abs();
    assert!(shift < 1e-6 * PI * PI, "{shift}");
    assert!(ReducedProblem::new(g, mode(0)).with_radius_factor(4.0).is_err());
}

#[test]
fn neumann_truncation_brackets_from_below() {
    let p = ReducedProblem::new(geom(1.0, 1.0), mode(0));
    let dirichlet = lowest(&p, 16);
    let neumann = lowest(&p.with_outer(RadialBoundary::Neumann), 16);
    assert!(neumann <= dirichlet);
    assert!(dirichlet - neumann < 1e-6);
}

#[test]
fn certificate_rayleigh_quotient_lies_between() {
    // A certificate whose tail ends at a finite radius, so that the truncated
    // mesh holds it entirely.
    let g = geom(1.0, 2.0);
    let base = RadialProfile::new(3.0, 3.0, 4.5).unwrap();
    let c = certify_with_profiles(&g, base, LocalizationBump::canonical(2.0).unwrap()).unwrap();
    let radius = c.params.tail.support_radius().max(g.a() + 5.0 * g.d());
    let p = ReducedProblem::new(g, mode(0)).with_radius(radius).unwrap();
    let m = MeshDensity { nz: 32 }.mesh(&p).unwrap();
    let sys = assemble(&p, &m).unwrap();
    let v = sys.interpolate(&m, |r, z| c.params.evaluate(&g, r, z).0);
    let rq = sys.rayleigh_quotient(&v);
    let l1 = solve_lowest(&p, &m, 1).unwrap().lowest();
    assert!(rq >= l1 && rq < PI * PI, "λ₁ = {l1}, quotient {rq}");
}

#[test]
fn refinement_orders() {
    let smooth = ReducedProblem::new(geom(1.0, 10.0), mode(0)).with_radius(5.0).unwrap();
    let study = refine_study(&smooth, &Mesh::conforming(&smooth, 80, 16).unwrap(), 3).unwrap();
    assert!((study.order - 2.0).abs() < 0.1, "{}", study.order);

    let g = geom(1.0, 1.0);
    let p = ReducedProblem::new(g, mode(0));
    let study = refine_study(&p, &Mesh::conforming(&p, 96, 16).unwrap(), 3).unwrap();
    assert!(study.order >= 1.0 && study.order <= 2.0, "{}", study.order);
    assert!(study.rows.windows(2).all(|w| w[0].lambda < w[1].lambda));
    let s = asymptotic_sandwich(&g, study.extrapolated).unwrap();
    assert!(s.lower <= study.extrapolated && study.extrapolated <= s.upper);
    assert!(refine_study(&p, &Mesh::conforming(&p, 96, 16).unwrap(), 2).is_err());
}

#[test]
fn gap_shrinks_under_bracket() {
    let gs: Vec<_> = [2.0, 4.0, 8.0].iter().map(|&a| geom(1.0, a)).collect();
    let rows = gap_asymptotics(&gs, MeshDensity { nz: 16 }).unwrap();
    for r in &rows {
        assert!(r.gap > 0.0 && r.gap <= r.bracket, "{r:?}");
        assert!((r.gap_a2 - r.gap * r.a * r.a).abs() < 1e-12);
    }
    assert!(rows.windows(2).all(|w| w[1].gap < w[0].gap));
    assert!(rows[2].gap < 0.0904);

    assert!(gap_asymptotics(&[geom(1.0, 4.0), geom(1.0, 2.0)], MeshDensity { nz: 16 }).is_err());
    assert!(gap_asymptotics(&[geom(1.0, 2.0), geom(2.0, 4.0)], MeshDensity { nz: 16 }).is_err());
}

#[test]
fn solves_are_deterministic_and_mode_local() {
    let g = geom(1.0, 1.5);
    let p0 = ReducedProblem::new(g, mode(0));
    let m0 = MeshDensity { nz: 16 }.mesh(&p0).unwrap();
    let first = solve_lowest(&p0, &m0, 2).unwrap();
    let p1 = ReducedProblem::new(g, mode(1));
    solve_lowest(&p1, &Mesh::conforming(&p1, 50, 20).unwrap(), 1).unwrap();
    let again = solve_lowest(&p0, &m0, 2).unwrap();
    assert_eq!(first.eigenvalues, again.eigenvalues);
    assert_eq!(first.vectors, again.vectors);
}

#[test]
fn mesh_must_conform() {
    let p = ReducedProblem::new(geom(1.0, 1.0), mode(0));
    let other = ReducedProblem::new(geom(1.0, 1.3), mode(0));
    let m = Mesh::conforming(&other, 100, 16).unwrap();
    assert!(matches!(assemble(&p, &m), Err(SpectralError::MeshMismatch(_))));
    assert!(Mesh::conforming(&p, 100, 8).is_err());
}
