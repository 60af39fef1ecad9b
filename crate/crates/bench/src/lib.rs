//! Shared workloads for the criterion benches.

use tusq_core::benchmarks::BenchmarkSpec;
use tusq_core::pipeline::{CircuitSource, Mode, RunConfig};

/// A timing-free run of `spec` at 1% gate and measurement error.
pub fn workload(spec: BenchmarkSpec, shots: u64, mode: Mode) -> RunConfig {
    let mut cfg = RunConfig::new(CircuitSource::Benchmark(spec));
    cfg.shots = shots;
    cfg.seed = 1;
    cfg.mode = mode;
    cfg.record_timings = false;
    cfg
}

pub fn qaoa(n_qubits: usize, layers: usize) -> BenchmarkSpec {
    BenchmarkSpec::Qaoa {
        n_qubits,
        layers,
        seed: 0,
    }
}
