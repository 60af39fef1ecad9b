use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use tusq_core::benchmarks::BenchmarkSpec;
use tusq_core::noise::DecoherenceParams;
use tusq_core::pipeline::{emit_report, run_pipeline, CircuitSource, Mode, RunConfig};
use tusq_core::tem::{BacktrackPolicy, Selection};
use tusq_core::TusqError;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Family {
    Qaoa,
    Adder,
    Ghz,
    Bitcode,
    Phasecode,
    Bv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Tusq,
    Naive,
    Dms,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SelectionArg {
    Proportional,
    Uniform,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BacktrackArg {
    Cheapest,
    Uncompute,
}

/// Noisy circuit simulation with error tallying, commutation and tree
/// execution. Prints the JSON report to stdout unless --out is given.
#[derive(Debug, Parser)]
#[command(name = "tusq", version)]
struct Args {
    /// JSON run configuration; flags given on the command line override it.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Circuit text file, one gate per line.
    #[arg(long, value_name = "FILE", conflicts_with = "benchmark")]
    circuit: Option<PathBuf>,

    #[arg(long, value_enum, value_name = "NAME")]
    benchmark: Option<Family>,

    /// Register size for qaoa, adder and ghz.
    #[arg(long)]
    qubits: Option<usize>,

    /// QAOA layer count.
    #[arg(long, default_value_t = 1)]
    layers: usize,

    /// Seed for the QAOA angle draw.
    #[arg(long, default_value_t = 0)]
    angle_seed: u64,

    /// Code distance for bitcode and phasecode.
    #[arg(long)]
    distance: Option<usize>,

    /// Bernstein-Vazirani secret bitstring.
    #[arg(long)]
    secret: Option<String>,

    #[arg(long, value_enum)]
    mode: Option<ModeArg>,

    #[arg(long)]
    shots: Option<u64>,

    #[arg(long)]
    seed: Option<u64>,

    /// Depolarizing probability after each gate.
    #[arg(long)]
    gate_error: Option<f64>,

    /// Bit-flip probability before each measurement.
    #[arg(long)]
    meas_error: Option<f64>,

    /// Gate duration for twirled decoherence, in seconds. Needs --t1 and --t2.
    #[arg(long, requires_all = ["t1", "t2"])]
    gate_time: Option<f64>,

    #[arg(long, requires = "gate_time")]
    t1: Option<f64>,

    #[arg(long, requires = "gate_time")]
    t2: Option<f64>,

    #[arg(long)]
    alpha: Option<f64>,

    #[arg(long)]
    beta: Option<usize>,

    #[arg(long, value_enum)]
    selection: Option<SelectionArg>,

    #[arg(long, value_enum)]
    backtrack: Option<BacktrackArg>,

    #[arg(long)]
    workers: Option<usize>,

    /// Statevector memory budget for parallel traversal, in bytes.
    #[arg(long)]
    memory_budget: Option<u64>,

    #[arg(long)]
    no_commute: bool,

    #[arg(long)]
    no_prune: bool,

    /// Leave stage_times_s null so the report is reproducible.
    #[arg(long)]
    no_timings: bool,

    /// Report path; a .csv with the distribution is written next to it.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

fn need<T>(v: Option<T>, flag: &str, family: &str) -> Result<T, TusqError> {
    v.ok_or_else(|| TusqError::Config(format!("--benchmark {family} needs {flag}")))
}

fn benchmark(args: &Args, family: Family) -> Result<BenchmarkSpec, TusqError> {
    Ok(match family {
        Family::Qaoa => BenchmarkSpec::Qaoa {
            n_qubits: need(args.qubits, "--qubits", "qaoa")?,
            layers: args.layers,
            seed: args.angle_seed,
        },
        Family::Adder => BenchmarkSpec::Adder {
            n_qubits: need(args.qubits, "--qubits", "adder")?,
        },
        Family::Ghz => BenchmarkSpec::Ghz {
            n_qubits: need(args.qubits, "--qubits", "ghz")?,
        },
        Family::Bitcode => BenchmarkSpec::BitCode {
            distance: need(args.distance, "--distance", "bitcode")?,
        },
        Family::Phasecode => BenchmarkSpec::PhaseCode {
            distance: need(args.distance, "--distance", "phasecode")?,
        },
        Family::Bv => BenchmarkSpec::Bv {
            secret: need(args.secret.clone(), "--secret", "bv")?,
        },
    })
}

fn build_config(args: &Args) -> Result<RunConfig, TusqError> {
    let source = match (&args.circuit, args.benchmark) {
        (Some(path), _) => Some(CircuitSource::File(path.clone())),
        (None, Some(family)) => Some(CircuitSource::Benchmark(benchmark(args, family)?)),
        (None, None) => None,
    };
    let mut cfg = match (&args.config, source) {
        (Some(path), source) => {
            let mut cfg = RunConfig::from_file(path)?;
            if let Some(s) = source {
                cfg.source = s;
            }
            cfg
        }
        (None, Some(s)) => RunConfig::new(s),
        (None, None) => {
            return Err(TusqError::Config(
                "give a circuit with --circuit, --benchmark or --config".into(),
            ))
        }
    };
    if let Some(m) = args.mode {
        cfg.mode = match m {
            ModeArg::Tusq => Mode::Tusq,
            ModeArg::Naive => Mode::Naive,
            ModeArg::Dms => Mode::Dms,
        };
    }
    if let Some(v) = args.shots {
        cfg.shots = v;
    }
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if let Some(v) = args.gate_error {
        cfg.noise.gate_error_p = v;
    }
    if let Some(v) = args.meas_error {
        cfg.noise.meas_error_p = v;
    }
    if let (Some(t), Some(t1), Some(t2)) = (args.gate_time, args.t1, args.t2) {
        cfg.noise.decoherence = Some(DecoherenceParams { t, t1, t2 });
    }
    if let Some(v) = args.alpha {
        cfg.pruning.alpha = v;
    }
    if let Some(v) = args.beta {
        cfg.pruning.beta = v;
    }
    if let Some(s) = args.selection {
        cfg.pruning.selection = match s {
            SelectionArg::Proportional => Selection::Proportional,
            SelectionArg::Uniform => Selection::Uniform,
        };
    }
    if let Some(b) = args.backtrack {
        cfg.backtrack = match b {
            BacktrackArg::Cheapest => BacktrackPolicy::Cheapest,
            BacktrackArg::Uncompute => BacktrackPolicy::Uncompute,
        };
    }
    if let Some(v) = args.workers {
        cfg.workers = v;
    }
    if let Some(v) = args.memory_budget {
        cfg.memory_budget = v;
    }
    cfg.commute &= !args.no_commute;
    cfg.prune &= !args.no_prune;
    cfg.record_timings &= !args.no_timings;
    if args.out.is_some() {
        cfg.out = args.out.clone();
    }
    Ok(cfg)
}

fn exit_code(e: &TusqError) -> u8 {
    match e {
        TusqError::OracleCapacity { .. } => 3,
        TusqError::Io(_) => 1,
        _ => 2,
    }
}

fn run(args: &Args) -> Result<(), TusqError> {
    let cfg = build_config(args)?;
    let report = run_pipeline(&cfg)?;
    match &cfg.out {
        Some(path) => {
            let csv = emit_report(&report, path)?;
            eprintln!(
                "wrote {} and {} (fidelity {:.6})",
                path.display(),
                csv.display(),
                report.fidelity
            );
        }
        None => println!("{}", report.to_json()?),
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("TUSQ_LOG", "warn")).init();
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
