use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use hypergamma::gammaseries::{build_series, Backend};
use hypergamma::groupmodel::gauss_model;
use hypergamma::polytope::degree_of_model;
use hypergamma::symfunc::lr_multiply;
use hypergamma_bench::{gauss_exponents, trace_power};

fn lr(c: &mut Criterion) {
    let f = trace_power(4, 3);
    let g = trace_power(3, 3);
    c.bench_function("lr_multiply deg4 x deg3 n=3", |b| b.iter(|| lr_multiply(black_box(&f), black_box(&g))));
}

fn degree(c: &mut Criterion) {
    let m = gauss_model(2);
    c.bench_function("degree gauss n=2", |b| b.iter(|| degree_of_model(black_box(&m)).unwrap()));
}

fn series(c: &mut Criterion) {
    let m = gauss_model(2);
    let s = gauss_exponents();
    c.bench_function("build_series gauss n=2 D=8", |b| {
        b.iter(|| build_series(black_box(&m), &s, Backend::DiagonalPair, 8).unwrap())
    });
}

criterion_group!(benches, lr, degree, series);
criterion_main!(benches);
