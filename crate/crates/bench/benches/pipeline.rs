use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use entgraph::{concurrence, pt_min_eigenvalue, realized_graph, reduce_pair, synthesize, StateRef};
use entgraph_bench::{alternating_graph, sample_density, synthesized_state};

fn pair_metrics(c: &mut Criterion) {
    let rho = sample_density();
    c.bench_function("concurrence", |b| b.iter(|| concurrence(black_box(&rho))));
    c.bench_function("pt_min_eigenvalue", |b| {
        b.iter(|| pt_min_eigenvalue(black_box(&rho)))
    });
}

fn reduction(c: &mut Criterion) {
    let mut group = c.benchmark_group("reduce_pair");
    for n in [4, 8, 12] {
        let s = synthesized_state(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &s, |b, s| {
            b.iter(|| reduce_pair(black_box(s), 1, 2))
        });
    }
    group.finish();
}

fn synthesis(c: &mut Criterion) {
    let mut group = c.benchmark_group("synthesize");
    group.sample_size(20);
    for n in [5, 6, 8] {
        let g = alternating_graph(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| synthesize(black_box(g)))
        });
    }
    group.finish();

    let s = synthesized_state(8);
    c.bench_function("realized_graph/8", |b| {
        b.iter(|| realized_graph(&StateRef::Pure(black_box(&s))))
    });
}

criterion_group!(benches, pair_metrics, reduction, synthesis);
criterion_main!(benches);
