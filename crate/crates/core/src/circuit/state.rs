use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;

use super::{bitstring, gate_matrix, Circuit, GateKind, GateMatrix, Operation};
use crate::error::{Result, TusqError};
use crate::pauli::Pauli;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Largest norm deviation `sample_state` accepts.
pub const SAMPLING_NORM_TOLERANCE: f64 = 1e-6;

/// `2^n` complex amplitudes. Qubit 0 is the least significant index bit.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>`.
    pub fn zero(n_qubits: usize) -> Self {
        assert!(n_qubits > 0 && n_qubits < usize::BITS as usize);
        let mut amps = vec![ZERO; 1 << n_qubits];
        amps[0] = ONE;
        StateVector { n_qubits, amps }
    }

    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let mut s = StateVector::zero(n_qubits);
        s.amps[0] = ZERO;
        s.amps[index] = ONE;
        s
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() < 2 || !amps.len().is_power_of_two() {
            return Err(TusqError::InvalidInput(format!(
                "amplitude count {} is not a power of two >= 2",
                amps.len()
            )));
        }
        let n_qubits = amps.len().trailing_zeros() as usize;
        Ok(StateVector { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn reset_zero(&mut self) {
        self.amps.fill(ZERO);
        self.amps[0] = ONE;
    }

    pub fn copy_from(&mut self, other: &StateVector) {
        self.n_qubits = other.n_qubits;
        self.amps.clone_from(&other.amps);
    }

    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn check_qubits(&self, op: &Operation) -> Result<()> {
        if op.kind == GateKind::Measure {
            return Err(TusqError::MeasureNotUnitary);
        }
        for &q in &op.qubits {
            if q >= self.n_qubits {
                return Err(TusqError::QubitOutOfRange {
                    qubit: q,
                    n_qubits: self.n_qubits,
                });
            }
        }
        Ok(())
    }

    pub fn apply_gate(&mut self, op: &Operation) -> Result<()> {
        self.check_qubits(op)?;
        self.apply_kind(op.kind, &op.qubits, op.angle());
        Ok(())
    }

    /// Applies the adjoint of `op`, undoing a previous `apply_gate`.
    pub fn apply_inverse(&mut self, op: &Operation) -> Result<()> {
        self.check_qubits(op)?;
        let (kind, angle) = match op.kind {
            GateKind::S => (GateKind::Sdg, 0.0),
            GateKind::Sdg => (GateKind::S, 0.0),
            GateKind::T => (GateKind::Tdg, 0.0),
            GateKind::Tdg => (GateKind::T, 0.0),
            GateKind::Rx | GateKind::Ry | GateKind::Rz => (op.kind, -op.angle()),
            other => (other, 0.0),
        };
        self.apply_kind(kind, &op.qubits, angle);
        Ok(())
    }

    /// Applies a (phase-free) Pauli. Paulis are self-inverse, so this also
    /// undoes itself.
    pub fn apply_pauli(&mut self, qubit: usize, pauli: Pauli) {
        assert!(qubit < self.n_qubits);
        match pauli {
            Pauli::I => {}
            Pauli::X => self.apply_x(qubit),
            Pauli::Y => self.apply_y(qubit),
            Pauli::Z => self.apply_diag(qubit, ONE, -ONE),
        }
    }

    fn apply_kind(&mut self, kind: GateKind, qubits: &[usize], angle: f64) {
        let q = qubits[0];
        match kind {
            GateKind::I => {}
            GateKind::X => self.apply_x(q),
            GateKind::Y => self.apply_y(q),
            GateKind::Z => self.apply_diag(q, ONE, -ONE),
            GateKind::S => self.apply_diag(q, ONE, Complex64::i()),
            GateKind::Sdg => self.apply_diag(q, ONE, -Complex64::i()),
            GateKind::T => self.apply_diag(
                q,
                ONE,
                Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4),
            ),
            GateKind::Tdg => self.apply_diag(
                q,
                ONE,
                Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4),
            ),
            GateKind::Rz => self.apply_diag(
                q,
                Complex64::from_polar(1.0, -angle / 2.0),
                Complex64::from_polar(1.0, angle / 2.0),
            ),
            GateKind::H | GateKind::Rx | GateKind::Ry => {
                let params: &[f64] = if kind.param_count() == 1 { &[angle] } else { &[] };
                match gate_matrix(kind, params) {
                    Ok(GateMatrix::One(m)) => self.apply_matrix(q, &m),
                    _ => unreachable!("single-qubit kinds have 2x2 matrices"),
                }
            }
            GateKind::Cnot => self.apply_cnot(qubits[0], qubits[1]),
            GateKind::Measure => unreachable!("rejected by check_qubits"),
        }
    }

    fn apply_matrix(&mut self, q: usize, m: &[[Complex64; 2]; 2]) {
        let stride = 1 << q;
        for chunk in self.amps.chunks_exact_mut(stride << 1) {
            let (lo, hi) = chunk.split_at_mut(stride);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = m[0][0] * x + m[0][1] * y;
                *b = m[1][0] * x + m[1][1] * y;
            }
        }
    }

    fn apply_diag(&mut self, q: usize, d0: Complex64, d1: Complex64) {
        let stride = 1 << q;
        for chunk in self.amps.chunks_exact_mut(stride << 1) {
            let (lo, hi) = chunk.split_at_mut(stride);
            if d0 != ONE {
                lo.iter_mut().for_each(|a| *a *= d0);
            }
            hi.iter_mut().for_each(|a| *a *= d1);
        }
    }

    fn apply_x(&mut self, q: usize) {
        let stride = 1 << q;
        for chunk in self.amps.chunks_exact_mut(stride << 1) {
            let (lo, hi) = chunk.split_at_mut(stride);
            lo.swap_with_slice(hi);
        }
    }

    fn apply_y(&mut self, q: usize) {
        let stride = 1 << q;
        let i = Complex64::i();
        for chunk in self.amps.chunks_exact_mut(stride << 1) {
            let (lo, hi) = chunk.split_at_mut(stride);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = -i * y;
                *b = i * x;
            }
        }
    }

    fn apply_cnot(&mut self, control: usize, target: usize) {
        let (low, high) = if control < target {
            (control, target)
        } else {
            (target, control)
        };
        let cbit = 1usize << control;
        let tbit = 1usize << target;
        let low_mask = (1usize << low) - 1;
        let high_mask = (1usize << (high - 1)) - 1;
        for k in 0..(self.amps.len() >> 2) {
            // Insert zero bits at positions `low` and `high`.
            let mut i = (k & low_mask) | ((k & !low_mask) << 1);
            i = (i & (high_mask | (1 << (high - 1)) | low_mask)) | ((i >> high) << (high + 1));
            let i = i | cbit;
            self.amps.swap(i, i | tbit);
        }
    }

    /// Draws `shots` basis indices i.i.d. from `|amp|^2` and adds them to `counts`.
    pub fn sample_into<R: Rng + ?Sized>(
        &self,
        shots: u64,
        rng: &mut R,
        counts: &mut BTreeMap<usize, u64>,
    ) -> Result<()> {
        if shots == 0 {
            return Ok(());
        }
        let mut cumulative = Vec::with_capacity(self.amps.len());
        let mut total = 0.0;
        for a in &self.amps {
            total += a.norm_sqr();
            cumulative.push(total);
        }
        let deviation = (total - 1.0).abs();
        if deviation > SAMPLING_NORM_TOLERANCE {
            return Err(TusqError::Unnormalized(deviation));
        }
        let last = cumulative.len() - 1;
        for _ in 0..shots {
            let u = rng.gen::<f64>() * total;
            let index = cumulative.partition_point(|&c| c <= u).min(last);
            *counts.entry(index).or_insert(0) += 1;
        }
        Ok(())
    }
}

/// Sequentially applies every unitary of `circuit` to a copy of `init`;
/// noise sites act as identities.
pub fn run_noiseless(circuit: &Circuit, init: &StateVector) -> Result<StateVector> {
    if init.n_qubits() != circuit.n_qubits() {
        return Err(TusqError::InvalidInput(format!(
            "state has {} qubits, circuit has {}",
            init.n_qubits(),
            circuit.n_qubits()
        )));
    }
    let mut state = init.clone();
    for op in circuit.ops().iter().filter(|op| op.is_effective_gate()) {
        state.apply_gate(op)?;
    }
    Ok(state)
}

/// Samples the full register `shots` times; keys are bitstrings with qubit
/// `n-1` leftmost.
pub fn sample_state<R: Rng + ?Sized>(
    state: &StateVector,
    shots: u64,
    rng: &mut R,
) -> Result<BTreeMap<String, u64>> {
    let mut counts = BTreeMap::new();
    state.sample_into(shots, rng, &mut counts)?;
    let qubits: Vec<usize> = (0..state.n_qubits()).collect();
    Ok(counts
        .into_iter()
        .map(|(index, count)| (bitstring(index, &qubits), count))
        .collect())
}
