//! Circuit representation and the statevector kernel.
//!
//! A [`Circuit`] is an ordered list of [`Operation`]s on `n_qubits` qubits.
//! Noise enters the circuit as *noise sites*: identity placeholders that a
//! sampled error realization later replaces with a concrete Pauli. Sites are
//! only created by [`crate::noise::attach_noise`].
//!
//! Qubit 0 is the least significant bit of an amplitude index.

mod gates;
mod parse;
mod state;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TusqError};

pub use gates::{gate_matrix, GateMatrix};
pub use parse::parse_circuit;
pub use state::{run_noiseless, sample_state, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GateKind {
    I,
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    Rx,
    Ry,
    Rz,
    Cnot,
    Measure,
}

impl GateKind {
    pub const ALL: [GateKind; 14] = [
        GateKind::I,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::H,
        GateKind::S,
        GateKind::Sdg,
        GateKind::T,
        GateKind::Tdg,
        GateKind::Rx,
        GateKind::Ry,
        GateKind::Rz,
        GateKind::Cnot,
        GateKind::Measure,
    ];

    pub fn arity(self) -> usize {
        match self {
            GateKind::Cnot => 2,
            _ => 1,
        }
    }

    pub fn param_count(self) -> usize {
        match self {
            GateKind::Rx | GateKind::Ry | GateKind::Rz => 1,
            _ => 0,
        }
    }

    pub fn is_unitary(self) -> bool {
        self != GateKind::Measure
    }

    /// Name used by the circuit text format.
    pub fn name(self) -> &'static str {
        match self {
            GateKind::I => "I",
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::H => "H",
            GateKind::S => "S",
            GateKind::Sdg => "SDG",
            GateKind::T => "T",
            GateKind::Tdg => "TDG",
            GateKind::Rx => "RX",
            GateKind::Ry => "RY",
            GateKind::Rz => "RZ",
            GateKind::Cnot => "CNOT",
            GateKind::Measure => "MEASURE",
        }
    }

    pub fn from_name(name: &str) -> Result<GateKind> {
        let upper = name.to_ascii_uppercase();
        GateKind::ALL
            .into_iter()
            .find(|k| k.name() == upper)
            .ok_or_else(|| TusqError::UnknownGate(name.to_string()))
    }
}

/// Index of a noise site in circuit order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NoiseSiteId(pub u32);

impl NoiseSiteId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Which channel a noise site draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SiteKind {
    /// Follows a unitary gate on one of its qubits.
    Gate,
    /// Immediately precedes a MEASURE.
    Measurement,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SiteInfo {
    pub op_index: usize,
    pub qubit: usize,
    pub kind: SiteKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Operation {
    pub kind: GateKind,
    /// `[control, target]` for CNOT, a single qubit otherwise.
    pub qubits: Vec<usize>,
    /// Rotation angles in radians.
    pub params: Vec<f64>,
    pub noise_site: Option<NoiseSiteId>,
}

impl Operation {
    pub fn new(kind: GateKind, qubits: Vec<usize>, params: Vec<f64>) -> Result<Self> {
        if qubits.len() != kind.arity() {
            return Err(TusqError::Arity {
                kind,
                expected: kind.arity(),
                got: qubits.len(),
            });
        }
        if params.len() != kind.param_count() {
            return Err(TusqError::ParamCount {
                kind,
                expected: kind.param_count(),
                got: params.len(),
            });
        }
        if qubits.len() == 2 && qubits[0] == qubits[1] {
            return Err(TusqError::RepeatedQubit(qubits[0]));
        }
        Ok(Operation {
            kind,
            qubits,
            params,
            noise_site: None,
        })
    }

    pub fn single(kind: GateKind, qubit: usize) -> Self {
        debug_assert!(kind.arity() == 1 && kind.param_count() == 0);
        Operation {
            kind,
            qubits: vec![qubit],
            params: Vec::new(),
            noise_site: None,
        }
    }

    pub fn rotation(kind: GateKind, qubit: usize, angle: f64) -> Self {
        debug_assert!(kind.param_count() == 1);
        Operation {
            kind,
            qubits: vec![qubit],
            params: vec![angle],
            noise_site: None,
        }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        debug_assert_ne!(control, target);
        Operation {
            kind: GateKind::Cnot,
            qubits: vec![control, target],
            params: Vec::new(),
            noise_site: None,
        }
    }

    pub fn measure(qubit: usize) -> Self {
        Operation::single(GateKind::Measure, qubit)
    }

    /// An identity placeholder for a noise site.
    pub(crate) fn site(qubit: usize, id: NoiseSiteId) -> Self {
        Operation {
            kind: GateKind::I,
            qubits: vec![qubit],
            params: Vec::new(),
            noise_site: Some(id),
        }
    }

    pub fn is_noise_site(&self) -> bool {
        self.noise_site.is_some()
    }

    /// True for operations the kernel has to execute: unitary, not an identity.
    pub fn is_effective_gate(&self) -> bool {
        self.kind.is_unitary() && self.kind != GateKind::I
    }

    pub fn angle(&self) -> f64 {
        self.params.first().copied().unwrap_or(0.0)
    }
}

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.name())?;
        for q in &self.qubits {
            write!(f, " {q}")?;
        }
        for p in &self.params {
            write!(f, " {p}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    ops: Vec<Operation>,
    sites: Vec<SiteInfo>,
    measured: Vec<bool>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        assert!(n_qubits > 0, "a circuit needs at least one qubit");
        Circuit {
            n_qubits,
            ops: Vec::new(),
            sites: Vec::new(),
            measured: vec![false; n_qubits],
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[Operation] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn sites(&self) -> &[SiteInfo] {
        &self.sites
    }

    pub fn noise_sites(&self) -> impl Iterator<Item = NoiseSiteId> + '_ {
        (0..self.sites.len()).map(|i| NoiseSiteId(i as u32))
    }

    /// Number of operations the kernel executes for a noiseless run.
    pub fn gate_count(&self) -> usize {
        self.ops.iter().filter(|op| op.is_effective_gate()).count()
    }

    /// Appends a noiseless operation after validating it against the register.
    pub fn push(&mut self, op: Operation) -> Result<()> {
        if op.noise_site.is_some() {
            return Err(TusqError::InvalidInput(
                "noise sites are created by attach_noise only".into(),
            ));
        }
        let op = Operation::new(op.kind, op.qubits, op.params)?;
        for &q in &op.qubits {
            if q >= self.n_qubits {
                return Err(TusqError::QubitOutOfRange {
                    qubit: q,
                    n_qubits: self.n_qubits,
                });
            }
            if self.measured[q] {
                return Err(TusqError::OpAfterMeasure(q));
            }
        }
        if op.kind == GateKind::Measure {
            self.measured[op.qubits[0]] = true;
        }
        self.ops.push(op);
        Ok(())
    }

    pub(crate) fn push_site(&mut self, qubit: usize, kind: SiteKind) {
        let id = NoiseSiteId(self.sites.len() as u32);
        self.sites.push(SiteInfo {
            op_index: self.ops.len(),
            qubit,
            kind,
        });
        self.ops.push(Operation::site(qubit, id));
    }

    /// Qubits carrying a MEASURE marker, ascending. A circuit without any
    /// marker reads out every qubit.
    pub fn measured_qubits(&self) -> Vec<usize> {
        let marked: Vec<usize> = (0..self.n_qubits).filter(|&q| self.measured[q]).collect();
        if marked.is_empty() {
            (0..self.n_qubits).collect()
        } else {
            marked
        }
    }

    pub fn has_measurements(&self) -> bool {
        self.measured.iter().any(|&m| m)
    }

    pub fn is_measured(&self, qubit: usize) -> bool {
        self.measured[qubit]
    }

    /// The same circuit with every noise site removed.
    pub fn without_noise(&self) -> Circuit {
        let mut out = Circuit::new(self.n_qubits);
        for op in self.ops.iter().filter(|op| !op.is_noise_site()) {
            out.ops.push(op.clone());
            if op.kind == GateKind::Measure {
                out.measured[op.qubits[0]] = true;
            }
        }
        out
    }

    /// Renders the circuit in the line-oriented text format. Noise sites are
    /// not part of the format and are skipped.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for op in self.ops.iter().filter(|op| !op.is_noise_site()) {
            out.push_str(&op.to_string());
            out.push('\n');
        }
        out
    }
}

/// Formats basis index `index` restricted to `qubits` as a bitstring with the
/// highest qubit leftmost.
pub fn bitstring(index: usize, qubits: &[usize]) -> String {
    qubits
        .iter()
        .rev()
        .map(|&q| if (index >> q) & 1 == 1 { '1' } else { '0' })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds_round_trip_through_names() {
        for kind in GateKind::ALL {
            assert_eq!(GateKind::from_name(kind.name()).unwrap(), kind);
        }
        assert!(matches!(
            GateKind::from_name("CCX"),
            Err(TusqError::UnknownGate(_))
        ));
    }

    #[test]
    fn rotation_needs_one_angle() {
        let err = Operation::new(GateKind::Rz, vec![0], vec![]).unwrap_err();
        assert!(matches!(err, TusqError::ParamCount { expected: 1, got: 0, .. }));
        let err = Operation::new(GateKind::H, vec![0], vec![0.3]).unwrap_err();
        assert!(matches!(err, TusqError::ParamCount { expected: 0, got: 1, .. }));
    }

    #[test]
    fn push_validates_register_and_measure_order() {
        let mut c = Circuit::new(2);
        assert!(matches!(
            c.push(Operation::single(GateKind::H, 2)),
            Err(TusqError::QubitOutOfRange { qubit: 2, .. })
        ));
        c.push(Operation::cnot(0, 1)).unwrap();
        assert!(matches!(
            Operation::new(GateKind::Cnot, vec![1, 1], vec![]),
            Err(TusqError::RepeatedQubit(1))
        ));
        c.push(Operation::measure(0)).unwrap();
        assert!(matches!(
            c.push(Operation::single(GateKind::X, 0)),
            Err(TusqError::OpAfterMeasure(0))
        ));
        c.push(Operation::single(GateKind::X, 1)).unwrap();
    }

    #[test]
    fn measured_qubits_default_to_whole_register() {
        let mut c = Circuit::new(3);
        assert_eq!(c.measured_qubits(), vec![0, 1, 2]);
        c.push(Operation::measure(2)).unwrap();
        c.push(Operation::measure(0)).unwrap();
        assert_eq!(c.measured_qubits(), vec![0, 2]);
    }

    #[test]
    fn bitstring_puts_high_qubit_left() {
        assert_eq!(bitstring(0b01, &[0, 1]), "01");
        assert_eq!(bitstring(0b110, &[0, 1, 2]), "110");
        assert_eq!(bitstring(0b110, &[0, 2]), "10");
    }
}
