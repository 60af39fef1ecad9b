use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use tusq_bench::{qaoa, workload};
use tusq_core::benchmarks::BenchmarkSpec;
use tusq_core::pipeline::Mode;
use tusq_core::run_pipeline;

fn tusq_vs_naive(c: &mut Criterion) {
    let mut group = c.benchmark_group("qaoa10 p2 1e4 shots");
    group.sample_size(10);
    for mode in [Mode::Tusq, Mode::Naive] {
        let cfg = workload(qaoa(10, 2), 10_000, mode);
        group.bench_function(format!("{mode:?}"), |b| b.iter(|| run_pipeline(&cfg).unwrap()));
    }
    group.finish();
}

fn workers(c: &mut Criterion) {
    let mut group = c.benchmark_group("adder13 workers");
    group.sample_size(10);
    for w in [1usize, 2, 4] {
        let mut cfg = workload(BenchmarkSpec::Adder { n_qubits: 13 }, 20_000, Mode::Tusq);
        cfg.workers = w;
        group.bench_with_input(BenchmarkId::from_parameter(w), &cfg, |b, cfg| {
            b.iter(|| run_pipeline(cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, tusq_vs_naive, workers);
criterion_main!(benches);
