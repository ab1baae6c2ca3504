//! Timings of the inner kernels the suites spend their time in.

use criterion::{criterion_group, criterion_main, Criterion};
use harmonic_core::automorphic::{eisenstein_direct, CosetTable};
use harmonic_core::numerics::special::bessel_k_imag;
use harmonic_core::suites::centered_circle_bump;
use harmonic_core::test_vectors::{make_bump, BumpSpec};
use harmonic_core::transforms::{psi_flat, sharp_transform, SharpMode, SharpOptions};
use harmonic_core::trilinear::k_lambda;
use harmonic_core::C64;
use std::hint::black_box;

fn bessel(c: &mut Criterion) {
    c.bench_function("bessel_k_imag t=13.78 x=5", |b| b.iter(|| bessel_k_imag(black_box(13.78), black_box(5.0)).unwrap()));
    c.bench_function("bessel_k_imag t=13.78 x=40", |b| b.iter(|| bessel_k_imag(black_box(13.78), black_box(40.0)).unwrap()));
}

fn kernels(c: &mut Criterion) {
    let tau = C64::new(0.0, 2.0);
    c.bench_function("k_lambda direct lambda=10i c=0.7", |b| b.iter(|| k_lambda(tau, C64::new(0.0, 10.0), black_box(0.7), 1e-8).unwrap()));
    let mut g = c.benchmark_group("k_lambda direct large lambda");
    g.sample_size(10);
    g.bench_function("lambda=40i c=0.7", |b| b.iter(|| k_lambda(tau, C64::new(0.0, 40.0), black_box(0.7), 1e-8).unwrap()));
    g.finish();
}

fn transforms(c: &mut Criterion) {
    let psi = make_bump(BumpSpec::circle()).unwrap();
    let u = centered_circle_bump(&psi, 0.6, 0.25).unwrap();
    let opts = SharpOptions { mode: SharpMode::Asymptotic { threshold: 0.0 }, acknowledge_degenerate: false, rel_tol: 1e-8 };
    c.bench_function("sharp asymptotic lambda=160i", |b| b.iter(|| sharp_transform(&u, C64::new(0.0, 2.0), C64::new(0.0, 160.0), opts).unwrap()));
    let line = make_bump(BumpSpec::line()).unwrap().to_line_function();
    c.bench_function("psi_flat xi=8 s=4i", |b| b.iter(|| psi_flat(&line, black_box(8.0), C64::new(0.0, 4.0), 1e-8).unwrap()));
}

fn eisenstein(c: &mut Criterion) {
    let z = C64::new(0.1, 1.3);
    let s = [C64::new(2.0, 0.0), C64::new(2.5, 13.78), C64::new(3.0, -13.78)];
    c.bench_function("eisenstein direct s=2.5", |b| b.iter(|| eisenstein_direct(black_box(z), C64::new(2.5, 0.0), 200, 1e-6)));
    let table = CosetTable::new(200).unwrap();
    c.bench_function("eisenstein table 3 exponents", |b| b.iter(|| table.eisenstein_multi(black_box(z), &s)));
}

criterion_group!(benches, bessel, kernels, transforms, eisenstein);
criterion_main!(benches);
