use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use waveguide_core::fdsolver::MeshDensity;
use waveguide_core::*;

fn zeros(c: &mut Criterion) {
    c.bench_function("zeros_below_30", |b| {
        b.iter(|| zeros_below(black_box(30.0), MultiplicityRule::Single).unwrap())
    });
    c.bench_function("bessel_j_5_at_40", |b| {
        b.iter(|| bessel_j(BesselOrder::new(5), black_box(40.0)).unwrap())
    });
}

fn energy(c: &mut Criterion) {
    let g = WaveguideGeometry::new(1.0, 1.0).unwrap();
    let tail = TailFamily::new(RadialProfile::canonical(&g), 0.1).unwrap();
    let p = TrialParams::new(0.5, tail, LocalizationBump::canonical(1.0).unwrap()).unwrap();
    c.bench_function("energy_quadrature", |b| b.iter(|| energy_quadrature(&g, black_box(&p)).unwrap()));
    c.bench_function("energy_closed_form", |b| b.iter(|| energy_closed_form(&g, black_box(&p)).unwrap()));
    c.bench_function("certify_a_0.1", |b| {
        let g = WaveguideGeometry::new(1.0, 0.1).unwrap();
        b.iter(|| certify_bound_state(black_box(&g)).unwrap())
    });
}

fn solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_unit_window");
    group.sample_size(10);
    let p = ReducedProblem::new(WaveguideGeometry::new(1.0, 1.0).unwrap(), BesselOrder::new(0));
    for nz in [16, 32, 64] {
        let mesh = MeshDensity { nz }.mesh(&p).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(nz), &mesh, |b, mesh| {
            b.iter(|| solve_lowest(&p, mesh, 1).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, zeros, energy, solve);
criterion_main!(benches);
