//! End-to-end runs: tally, commute, prune, build the tree, traverse, sample.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use log::{debug, info};
use rand::distributions::WeightedIndex;
use rand::prelude::Distribution as _;
use serde::{Deserialize, Serialize};

use crate::benchmarks::BenchmarkSpec;
use crate::circuit::{parse_circuit, run_noiseless, Circuit, StateVector};
use crate::dist::{self, Counts, Distribution};
use crate::ecm::{identity_reduction, reduce_tally, tally_ers};
use crate::error::{Result, TusqError};
use crate::noise::{attach_noise, DecoherenceParams, NoiseSpec};
use crate::oracle::{dms_run, naive_svs, pruning_bound, MAX_DMS_QUBITS};
use crate::rng;
use crate::tem::{
    build_tree, dftt_execute, parallel_subtrees, partition_significant, BacktrackPolicy,
    PruningConfig, PruningPartition, TraversalStats,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CircuitSource {
    Benchmark(BenchmarkSpec),
    File(PathBuf),
}

impl CircuitSource {
    pub fn load(&self) -> Result<Circuit> {
        match self {
            CircuitSource::Benchmark(spec) => spec.generate(),
            CircuitSource::File(path) => parse_circuit(&fs::read_to_string(path)?),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Tusq,
    /// One statevector run per shot.
    Naive,
    /// Exact density-matrix distribution, sampled `shots` times.
    Dms,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseConfig {
    pub gate_error_p: f64,
    pub meas_error_p: f64,
    #[serde(default)]
    pub decoherence: Option<DecoherenceParams>,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig {
            gate_error_p: 0.01,
            meas_error_p: 0.01,
            decoherence: None,
        }
    }
}

impl NoiseConfig {
    pub fn to_spec(&self) -> Result<NoiseSpec> {
        NoiseSpec::new(self.gate_error_p, self.meas_error_p, self.decoherence)
    }
}

fn default_shots() -> u64 {
    100_000
}

fn default_workers() -> usize {
    1
}

fn default_true() -> bool {
    true
}

fn default_memory_budget() -> u64 {
    8 << 30
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub source: CircuitSource,
    #[serde(default = "default_shots")]
    pub shots: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub noise: NoiseConfig,
    #[serde(default)]
    pub pruning: PruningConfig,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default = "default_true")]
    pub commute: bool,
    #[serde(default = "default_true")]
    pub prune: bool,
    #[serde(default)]
    pub backtrack: BacktrackPolicy,
    /// Off makes `stage_times_s` null so reports are reproducible byte for byte.
    #[serde(default = "default_true")]
    pub record_timings: bool,
    /// Statevector bytes the parallel traversal may hold at once.
    #[serde(default = "default_memory_budget")]
    pub memory_budget: u64,
    /// Where the CLI writes the report; not echoed.
    #[serde(default, skip_serializing)]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(source: CircuitSource) -> Self {
        RunConfig {
            source,
            shots: default_shots(),
            seed: 0,
            noise: NoiseConfig::default(),
            pruning: PruningConfig::default(),
            mode: Mode::default(),
            workers: default_workers(),
            commute: true,
            prune: true,
            backtrack: BacktrackPolicy::default(),
            record_timings: true,
            memory_budget: default_memory_budget(),
            out: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| TusqError::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    /// Checks everything that does not need the circuit.
    pub fn validate(&self) -> Result<()> {
        if self.shots == 0 {
            return Err(TusqError::Config("shots must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(TusqError::Config("workers must be at least 1".into()));
        }
        self.pruning
            .validate()
            .map_err(|e| TusqError::Config(format!("pruning: {e}")))?;
        if self.prune && self.pruning.beta == 0 {
            // Nothing would stand in for the insignificant shots.
            return Err(TusqError::Config(
                "pruning: beta must be at least 1 so shot totals are conserved".into(),
            ));
        }
        self.noise
            .to_spec()
            .map_err(|e| TusqError::Config(format!("noise: {e}")))?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct KeyCounts {
    /// `S1`, shots drawn.
    pub sampled: u64,
    /// `S2`, distinct raw error realizations.
    pub tallied: Option<u64>,
    /// `S3`, distinct keys after commutation.
    pub commuted: Option<u64>,
    pub significant: Option<u64>,
    pub selected_insignificant: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub distribution: Counts,
    pub stage_times_s: Option<BTreeMap<String, f64>>,
    pub key_counts: KeyCounts,
    pub traversal_stats: Option<TraversalStats>,
    pub pruning_bound: Option<f64>,
    /// Classical fidelity of the output against the noiseless distribution.
    pub fidelity: f64,
}

impl RunReport {
    pub fn probabilities(&self) -> Distribution {
        dist::normalize(&self.distribution)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| TusqError::Config(e.to_string()))
    }
}

struct Timer {
    enabled: bool,
    start: Instant,
    stages: BTreeMap<String, f64>,
}

impl Timer {
    fn new(enabled: bool) -> Self {
        Timer {
            enabled,
            start: Instant::now(),
            stages: BTreeMap::new(),
        }
    }

    fn stage<T>(&mut self, name: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
        let t = Instant::now();
        let out = f()?;
        let dt = t.elapsed().as_secs_f64();
        debug!("stage {name}: {dt:.6}s");
        self.stages.insert(name.to_string(), dt);
        Ok(out)
    }

    fn finish(mut self) -> Option<BTreeMap<String, f64>> {
        let total = self.start.elapsed().as_secs_f64();
        self.stages.insert("total".into(), total);
        self.enabled.then_some(self.stages)
    }
}

/// Noiseless output distribution of `circuit` over its measured qubits.
pub fn ideal_distribution(circuit: &Circuit) -> Result<Distribution> {
    let state = run_noiseless(circuit, &StateVector::zero(circuit.n_qubits()))?;
    Ok(dist::project_probs(&state.probabilities(), &circuit.measured_qubits()))
}

fn sample_probs(probs: &[f64], shots: u64, seed: u64) -> Result<BTreeMap<usize, u64>> {
    let index = WeightedIndex::new(probs)
        .map_err(|e| TusqError::InvalidInput(format!("probability vector: {e}")))?;
    let mut rng = rng::stream(seed, rng::EXACT);
    let mut counts = BTreeMap::new();
    for _ in 0..shots {
        *counts.entry(index.sample(&mut rng)).or_insert(0) += 1;
    }
    Ok(counts)
}

pub fn run_pipeline(cfg: &RunConfig) -> Result<RunReport> {
    cfg.validate()?;
    let mut timer = Timer::new(cfg.record_timings);
    let circuit = cfg.source.load()?;
    if cfg.mode == Mode::Dms && circuit.n_qubits() > MAX_DMS_QUBITS {
        return Err(TusqError::OracleCapacity {
            n_qubits: circuit.n_qubits(),
            max: MAX_DMS_QUBITS,
        });
    }
    let noisy = attach_noise(&circuit, &cfg.noise.to_spec()?)?;
    let measured = noisy.circuit.measured_qubits();
    info!(
        "{:?} run: {} qubits, {} gates, {} noise sites, {} shots",
        cfg.mode,
        circuit.n_qubits(),
        circuit.gate_count(),
        noisy.n_sites(),
        cfg.shots
    );

    let mut key_counts = KeyCounts {
        sampled: cfg.shots,
        ..KeyCounts::default()
    };
    let mut traversal_stats = None;
    let mut bound = None;

    let counts = match cfg.mode {
        Mode::Tusq => {
            let tally = timer.stage("tally", || {
                Ok(tally_ers(&noisy, cfg.shots, &mut rng::stream(cfg.seed, rng::TALLY)))
            })?;
            key_counts.tallied = Some(tally.len() as u64);
            let canonical = timer.stage("commute", || {
                if cfg.commute {
                    reduce_tally(&noisy.circuit, &tally)
                } else {
                    Ok(identity_reduction(&tally))
                }
            })?;
            key_counts.commuted = Some(canonical.len() as u64);
            let partition = timer.stage("prune", || {
                if cfg.prune {
                    let mut r = rng::stream(cfg.seed, rng::PRUNE);
                    partition_significant(&canonical, &cfg.pruning, &mut r)
                } else {
                    Ok(PruningPartition::unpruned(&canonical))
                }
            })?;
            key_counts.significant = Some(partition.significant.len() as u64);
            key_counts.selected_insignificant = Some(partition.selected_insignificant.len() as u64);
            if cfg.prune {
                bound = Some(pruning_bound(&partition));
            }
            let tree = timer.stage("tree", || build_tree(&noisy.circuit, partition.kept()))?;
            let init = StateVector::zero(circuit.n_qubits());
            let (counts, stats) = timer.stage("traverse", || {
                if cfg.workers == 1 {
                    dftt_execute(&tree, &init, cfg.seed, cfg.backtrack)
                } else {
                    parallel_subtrees(
                        &tree,
                        &init,
                        cfg.workers,
                        cfg.seed,
                        cfg.backtrack,
                        cfg.memory_budget,
                    )
                }
            })?;
            info!(
                "S1={} S2={} S3={} leaves={} applications={} naive={}",
                cfg.shots,
                tally.len(),
                canonical.len(),
                stats.leaves,
                stats.total_applications(),
                stats.naive_gate_applications
            );
            traversal_stats = Some(stats);
            counts
        }
        Mode::Naive => timer.stage("simulate", || naive_svs(&noisy, cfg.shots, cfg.seed))?,
        Mode::Dms => {
            let probs = timer.stage("simulate", || dms_run(&noisy))?;
            timer.stage("sample", || sample_probs(&probs, cfg.shots, cfg.seed))?
        }
    };

    let distribution = dist::project_counts(&counts, &measured);
    let stage_times_s = timer.finish();
    let fidelity = dist::classical_fidelity(&dist::normalize(&distribution), &ideal_distribution(&circuit)?);
    Ok(RunReport {
        config: cfg.clone(),
        distribution,
        stage_times_s,
        key_counts,
        traversal_stats,
        pruning_bound: bound,
        fidelity,
    })
}

/// Writes the report as JSON to `path` and the distribution as
/// `bitstring,count` rows next to it with a `.csv` extension.
pub fn emit_report(report: &RunReport, path: &Path) -> Result<PathBuf> {
    let mut json = report.to_json()?;
    json.push('\n');
    fs::write(path, json)?;
    let csv_path = path.with_extension("csv");
    let mut csv = String::from("bitstring,count\n");
    for (k, c) in &report.distribution {
        csv.push_str(&format!("{k},{c}\n"));
    }
    fs::write(&csv_path, csv)?;
    Ok(csv_path)
}
