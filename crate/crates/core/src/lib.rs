//! Noisy quantum circuit simulation on statevectors.
//!
//! Sampled error realizations are tallied, canonicalized by pushing Paulis
//! through the circuit, and executed as a shared-prefix tree so that common
//! gate prefixes run once and are rolled back with inverse gates.

pub mod benchmarks;
pub mod circuit;
pub mod dist;
pub mod ecm;
pub mod error;
pub mod noise;
pub mod oracle;
pub mod pauli;
pub mod pipeline;
pub mod rng;
pub mod tem;

pub use circuit::{Circuit, GateKind, Operation, StateVector};
pub use error::{Result, TusqError};
pub use noise::{attach_noise, ErrorRealization, NoiseSpec, NoisyCircuit, PauliChannel};
pub use pauli::Pauli;
pub use pipeline::{emit_report, run_pipeline, CircuitSource, Mode, RunConfig, RunReport};
