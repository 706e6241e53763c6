use std::hint::black_box;

use ancilla_bench::{decompose, example7_sd, example8_sd, haar, hermitian};
use ancilla_core::gallery::find_sic_fiducial;
use ancilla_core::numerics::herm_eig;
use ancilla_core::physicality::sample_sb;
use ancilla_core::{schmidt_decompose, Tolerances};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn eig(c: &mut Criterion) {
    let tol = Tolerances::default();
    let mut group = c.benchmark_group("herm_eig");
    for d in [4, 16, 64] {
        let m = hermitian(d);
        group.bench_with_input(BenchmarkId::from_parameter(d), &m, |b, m| {
            b.iter(|| herm_eig(black_box(m), &tol).unwrap())
        });
    }
    group.finish();
}

fn schmidt(c: &mut Criterion) {
    let tol = Tolerances::default();
    let mut group = c.benchmark_group("schmidt_decompose");
    for (d_a, d_b) in [(2, 2), (3, 3), (4, 4), (5, 5)] {
        let bu = haar(d_a, d_b);
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{d_a}x{d_b}")),
            &bu,
            |b, bu| b.iter(|| schmidt_decompose(black_box(bu), &tol).unwrap()),
        );
    }
    group.finish();
}

fn sampling(c: &mut Criterion) {
    let tol = Tolerances::default();
    let mut group = c.benchmark_group("sample_sb_500");
    for d in [3, 5] {
        let sd = example7_sd(d);
        group.bench_with_input(BenchmarkId::new("example7", d), &sd, |b, sd| {
            b.iter(|| sample_sb(black_box(sd), 500, 42, &tol).unwrap())
        });
        let sd = example8_sd(d);
        group.bench_with_input(BenchmarkId::new("example8", d), &sd, |b, sd| {
            b.iter(|| sample_sb(black_box(sd), 500, 42, &tol).unwrap())
        });
    }
    let sd = decompose(&haar(2, 4));
    group.bench_function("haar_2x4", |b| {
        b.iter(|| sample_sb(black_box(&sd), 500, 42, &tol).unwrap())
    });
    group.finish();
}

fn sic(c: &mut Criterion) {
    let mut group = c.benchmark_group("sic_search");
    group.sample_size(10);
    for d in [3, 5] {
        group.bench_with_input(BenchmarkId::from_parameter(d), &d, |b, &d| {
            b.iter(|| find_sic_fiducial(d, 2026, 5000).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, eig, schmidt, sampling, sic);
criterion_main!(benches);
