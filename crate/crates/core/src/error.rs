use thiserror::Error;

use crate::circuit::GateKind;

pub type Result<T, E = TusqError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum TusqError {
    #[error("unknown gate `{0}`")]
    UnknownGate(String),

    #[error("{kind:?} takes {expected} parameter(s), got {got}")]
    ParamCount {
        kind: GateKind,
        expected: usize,
        got: usize,
    },

    #[error("{kind:?} acts on {expected} qubit(s), got {got}")]
    Arity {
        kind: GateKind,
        expected: usize,
        got: usize,
    },

    #[error("qubit {qubit} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },

    #[error("operation repeats qubit {0}")]
    RepeatedQubit(usize),

    #[error("MEASURE has no unitary matrix")]
    MeasureNotUnitary,

    #[error("qubit {0} is operated on after its MEASURE")]
    OpAfterMeasure(usize),

    #[error("state is not normalized (norm deviation {0:.3e})")]
    Unnormalized(f64),

    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),

    #[error("channel probabilities sum to {0}, expected 1")]
    ChannelSum(f64),

    #[error("invalid decoherence parameters: {0}")]
    Decoherence(String),

    #[error("circuit already carries noise sites")]
    AlreadyAnnotated,

    #[error("error realization has {got} sites, circuit has {expected}")]
    SiteCount { expected: usize, got: usize },

    #[error("duplicate canonical error realization in execution set")]
    DuplicateKey,

    #[error("{0}")]
    InvalidInput(String),

    #[error("density-matrix oracle supports at most {max} qubits, circuit has {n_qubits}")]
    OracleCapacity { n_qubits: usize, max: usize },

    #[error("{workers} workers need {required} bytes of statevector memory, budget is {budget}")]
    MemoryBudget {
        workers: usize,
        required: u64,
        budget: u64,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
