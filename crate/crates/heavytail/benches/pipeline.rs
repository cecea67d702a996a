//! Trial-pipeline benchmarks: the data-parallel executor against the
//! sequential fallback on the Monte Carlo workloads that dominate runs.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use heavytail::ensembles::EnsembleSpec;
use heavytail::experiment::{collect_spectra, Executor};

fn executors() -> Vec<(&'static str, Executor)> {
    #[allow(unused_mut)]
    let mut list = vec![("sequential", Executor::Sequential)];
    #[cfg(feature = "parallel")]
    list.push(("parallel", Executor::Parallel { workers: None }));
    list
}

fn bench_inverse_ginibre_batch(c: &mut Criterion) {
    let mut group = c.benchmark_group("inverse-ginibre-sum-n64-l2");
    group.sample_size(10);
    let spec = EnsembleSpec::inverse_ginibre_sum(64, 1, 2);
    for (name, exec) in executors() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, exec| {
            b.iter(|| collect_spectra(&spec, 32, 1234, *exec, None).unwrap())
        });
    }
    group.finish();
}

fn bench_stable_gue_batch(c: &mut Criterion) {
    let mut group = c.benchmark_group("stable-gue-n64");
    group.sample_size(10);
    let spec = EnsembleSpec::stable_gue(64, 1.0);
    for (name, exec) in executors() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, exec| {
            b.iter(|| collect_spectra(&spec, 32, 99, *exec, None).unwrap())
        });
    }
    group.finish();
}

fn bench_direct_sum_batch(c: &mut Criterion) {
    let mut group = c.benchmark_group("inverse-ginibre-direct-n64-l3");
    group.sample_size(10);
    let spec = EnsembleSpec::inverse_ginibre_direct_sum(64, 1, 3);
    for (name, exec) in executors() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, exec| {
            b.iter(|| collect_spectra(&spec, 16, 7, *exec, None).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_inverse_ginibre_batch,
    bench_stable_gue_batch,
    bench_direct_sum_batch
);
criterion_main!(benches);
