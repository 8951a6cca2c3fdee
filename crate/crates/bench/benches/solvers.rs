use criterion::{criterion_group, criterion_main, Criterion};
use std::f64::consts::PI;
use std::hint::black_box;

use cmc_tubes::*;

fn bench_radius(c: &mut Criterion) {
    let space = AmbientSpace::new(0.0, 1.0).unwrap();
    let point = ModuliPoint::new(&space, 2.0, -0.8).unwrap();
    c.bench_function("radius_at", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for i in 0..64 {
                let sigma = PI / 2.0 + 2.0 * PI * i as f64 / 63.0;
                acc += radius_at(black_box(&space), black_box(&point), black_box(sigma));
            }
            acc
        })
    });
}

fn bench_closing_defect(c: &mut Criterion) {
    let space = AmbientSpace::new(0.0, 1.0).unwrap();
    let pitch = Pitch::new(1.0).unwrap();
    let point = ModuliPoint::new(&space, 2.0, -0.8).unwrap();
    let quad = QuadratureSettings::default();
    c.bench_function("closing_defect", |b| {
        b.iter(|| closing_defect(black_box(&space), pitch, black_box(&point), &quad).unwrap())
    });
}

fn bench_tube_energy(c: &mut Criterion) {
    let space = AmbientSpace::new(0.0, 1.0).unwrap();
    let pitch = Pitch::new(1.0).unwrap();
    let roots = RootFindSettings::default();
    let quad = QuadratureSettings::default();
    c.bench_function("tube_energy_heisenberg", |b| {
        b.iter(|| tube_energy(black_box(&space), pitch, black_box(2.0), &roots, &quad).unwrap())
    });
}

fn bench_direct_ode(c: &mut Criterion) {
    let space = AmbientSpace::new(0.0, 1.0).unwrap();
    let pitch = Pitch::new(1.0).unwrap();
    let point = ModuliPoint::new(&space, 2.0, -0.8136234481530142).unwrap();
    let r0 = radius_at(&space, &point, PI / 2.0);
    let ctrl = StepControl::default();
    c.bench_function("direct_ode_full_period", |b| {
        b.iter(|| {
            integrate_to_sigma(
                black_box(&space),
                pitch,
                2.0,
                (r0, PI / 2.0, 0.0),
                5.0 * PI / 2.0,
                &ctrl,
            )
            .unwrap()
        })
    });
}

fn bench_area(c: &mut Criterion) {
    let space = AmbientSpace::new(4.0, 0.5).unwrap();
    let pitch = space.berger_pitch(1, 2).unwrap().pitch;
    let roots = RootFindSettings::default();
    let quad = QuadratureSettings::default();
    let tube = tube_energy(&space, pitch, 1.0, &roots, &quad).unwrap();
    c.bench_function("tube_area_horizontal", |b| {
        b.iter(|| tube_area(black_box(&space), 2, black_box(&tube), &quad).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = bench_radius, bench_closing_defect, bench_tube_energy, bench_direct_ode, bench_area
}
criterion_main!(benches);
