use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use twophase_bench::ball_profile;
use twophase_core::geometry::{Dimension, VolumeSpec};
use twophase_core::{
    bessel_j, bessel_zero, improve, level_threshold, principal_eigenvalue, shoot, Order,
    ZeroIndex,
};

fn bench_bessel(c: &mut Criterion) {
    let nu = Order::new(1.5).unwrap();
    c.bench_function("bessel_j nu=3/2 x=10", |b| {
        b.iter(|| bessel_j(black_box(nu), black_box(10.0)).unwrap())
    });
    c.bench_function("bessel_j nu=3/2 x=50 (integral path)", |b| {
        b.iter(|| bessel_j(black_box(nu), black_box(50.0)).unwrap())
    });
    let idx = ZeroIndex::new(Order::new(0.0).unwrap(), 3).unwrap();
    c.bench_function("bessel_zero j_{0,3}", |b| b.iter(|| bessel_zero(black_box(idx)).unwrap()));
}

fn bench_eigensolver(c: &mut Criterion) {
    let profile = ball_profile(3, 1.0, 1.05, 0.9);
    c.bench_function("shoot n=3 two-layer", |b| {
        b.iter(|| shoot(black_box(&profile), black_box(10.0)).unwrap())
    });
    let mut group = c.benchmark_group("eigen");
    group.sample_size(20);
    group.bench_function("principal_eigenvalue n=3 two-layer", |b| {
        b.iter(|| principal_eigenvalue(black_box(&profile), 1e-10).unwrap())
    });
    group.finish();
}

fn bench_rearrangement(c: &mut Criterion) {
    let profile = ball_profile(3, 1.0, 1.05, 0.9);
    let spec = VolumeSpec::new(Dimension::new(3).unwrap(), profile.high_measure()).unwrap();
    let sol = principal_eigenvalue(&profile, 1e-10).unwrap();
    c.bench_function("level_threshold n=3", |b| {
        b.iter(|| level_threshold(black_box(&sol), black_box(&spec)).unwrap())
    });
    let mut group = c.benchmark_group("improve");
    group.sample_size(10);
    group.bench_function("improve n=3 two-layer", |b| {
        b.iter(|| improve(black_box(&profile), black_box(&spec), 1e-10).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_bessel, bench_eigensolver, bench_rearrangement);
criterion_main!(benches);
