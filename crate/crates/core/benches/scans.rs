//! Ball scans, sequential against rayon-parallel.

use std::hint::black_box;

use biorder::oracle::{check_biinvariance, MagnusOrder};
use biorder::rational::{int, q};
use biorder::realization::{
    check_merging_with, dynnol_failures, merge, standard_realization, FactorSpec,
};
use biorder::Exec;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn biinvariance(c: &mut Criterion) {
    let mut group = c.benchmark_group("magnus_biinvariance");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, 2), &exec, |b, &exec| {
            b.iter(|| check_biinvariance(&MagnusOrder, black_box(2), exec))
        });
    }
    group.finish();
}

fn merging(c: &mut Criterion) {
    let z = standard_realization(&FactorSpec::z(int(0)));
    let mut group = c.benchmark_group("merge_check");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, 3), &exec, |b, &exec| {
            b.iter(|| check_merging_with(&z, &z, black_box(3), exec))
        });
    }
    group.finish();
}

fn domination(c: &mut Criterion) {
    let z = standard_realization(&FactorSpec::z(int(0)));
    let r = merge(&z, &z, &q(1, 10), 3, 7).unwrap().realization;
    let mut group = c.benchmark_group("dynnol_proxy");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, 3), &exec, |b, &exec| {
            b.iter(|| dynnol_failures(&r, black_box(3), 8, exec))
        });
    }
    group.finish();
}

criterion_group!(benches, biinvariance, merging, domination);
criterion_main!(benches);
