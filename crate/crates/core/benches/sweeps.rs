use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use substoch::construction::enumerate_fixed_sum_vertices;
use substoch::decomposition::DecompositionStrategy;
use substoch::ratmat::rational::rat;
use substoch::sweep::{decomposition_sweep, fixed_sum_agreement_sweep, permanent_bound_sweep};
use substoch::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn agreement(c: &mut Criterion) {
    let mut group = c.benchmark_group("agreement_sweep");
    group.sample_size(10);
    let s = rat(18, 5);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, "n4"), &exec, |b, &exec| {
            b.iter(|| fixed_sum_agreement_sweep(4, &s, 200, 1, exec))
        });
    }
    group.finish();
}

fn permanents(c: &mut Criterion) {
    let mut group = c.benchmark_group("permanent_sweep");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, "n5"), &exec, |b, &exec| {
            b.iter(|| permanent_bound_sweep(5, 500, 2, exec))
        });
    }
    group.finish();
}

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_fixed_sum");
    group.sample_size(10);
    let s = rat(37, 10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, "n5"), &exec, |b, &exec| {
            b.iter(|| enumerate_fixed_sum_vertices(5, &s, 5, exec).unwrap())
        });
    }
    group.finish();
}

fn decomposition(c: &mut Criterion) {
    let mut group = c.benchmark_group("decomposition_sweep");
    group.sample_size(10);
    let sums = [rat(3, 2), rat(12, 5), rat(37, 10)];
    for (name, exec) in MODES {
        for (label, strategy) in [("peel", DecompositionStrategy::Peel), ("split", DecompositionStrategy::Split)] {
            group.bench_with_input(BenchmarkId::new(name, label), &exec, |b, &exec| {
                b.iter(|| decomposition_sweep(4, &sums, 20, 3, strategy, exec))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, agreement, permanents, enumeration, decomposition);
criterion_main!(benches);
