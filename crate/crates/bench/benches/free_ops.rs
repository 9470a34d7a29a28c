//! Benchmarks for the measure-side kernels: moment and cumulant series,
//! support edge extraction, and density tabulation on convolution trees.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use freespec_core::{
    cumulants, density, gamma_measure, moments, support_edges, MeasureExpr,
};

fn lumpy() -> MeasureExpr {
    MeasureExpr::atomic(vec![(-1.0, 0.2), (0.3, 0.5), (2.0, 0.3)]).unwrap()
}

fn mixed_tree() -> MeasureExpr {
    MeasureExpr::free_conv(vec![
        (MeasureExpr::semicircle(0.0, 1.0).unwrap(), 1.0),
        (MeasureExpr::marchenko_pastur(2.0).unwrap(), 1.5),
        (lumpy(), 2.0),
    ])
    .unwrap()
}

fn series(c: &mut Criterion) {
    let tree = mixed_tree();
    c.bench_function("moments order 16 on a mixed tree", |b| {
        b.iter(|| moments(black_box(&tree), 16).unwrap())
    });
    c.bench_function("cumulants order 24 on a mixed tree", |b| {
        b.iter(|| cumulants(black_box(&tree), 24).unwrap())
    });
}

fn edges(c: &mut Criterion) {
    let atoms = lumpy();
    c.bench_function("support edges of an atomic power", |b| {
        b.iter(|| support_edges(black_box(&atoms), 2.5).unwrap())
    });
    let transposed = gamma_measure(&MeasureExpr::marchenko_pastur(4.0).unwrap(), 3).unwrap();
    c.bench_function("support edges of a transpose law", |b| {
        b.iter(|| support_edges(black_box(&transposed), 1.0).unwrap())
    });
}

fn densities(c: &mut Criterion) {
    let tree = mixed_tree();
    let span = support_edges(&tree, 1.0).unwrap();
    let grid: Vec<f64> = (0..200)
        .map(|i| span.lo + span.width() * i as f64 / 199.0)
        .collect();
    c.bench_function("density on 200 grid points", |b| {
        b.iter(|| density(black_box(&tree), 1.0, black_box(&grid)).unwrap())
    });
}

criterion_group!(benches, series, edges, densities);
criterion_main!(benches);
