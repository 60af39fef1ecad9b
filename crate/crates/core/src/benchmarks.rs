//! Benchmark circuit families and evaluation metrics.

use std::f64::consts::TAU;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, GateKind, Operation};
use crate::error::{Result, TusqError};
use crate::rng;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum BenchmarkSpec {
    Qaoa { n_qubits: usize, layers: usize, seed: u64 },
    Adder { n_qubits: usize },
    Ghz { n_qubits: usize },
    BitCode { distance: usize },
    PhaseCode { distance: usize },
    /// Secret read left to right as the expected output bitstring.
    Bv { secret: String },
}

impl BenchmarkSpec {
    pub fn generate(&self) -> Result<Circuit> {
        match self {
            BenchmarkSpec::Qaoa { n_qubits, layers, seed } => gen_qaoa(*n_qubits, *layers, *seed),
            BenchmarkSpec::Adder { n_qubits } => gen_adder(*n_qubits),
            BenchmarkSpec::Ghz { n_qubits } => gen_ghz(*n_qubits),
            BenchmarkSpec::BitCode { distance } => gen_bit_code(*distance),
            BenchmarkSpec::PhaseCode { distance } => gen_phase_code(*distance),
            BenchmarkSpec::Bv { secret } => gen_bv(secret),
        }
    }
}

impl fmt::Display for BenchmarkSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BenchmarkSpec::Qaoa { n_qubits, layers, .. } => write!(f, "qaoa(n={n_qubits}, p={layers})"),
            BenchmarkSpec::Adder { n_qubits } => write!(f, "adder(n={n_qubits})"),
            BenchmarkSpec::Ghz { n_qubits } => write!(f, "ghz(n={n_qubits})"),
            BenchmarkSpec::BitCode { distance } => write!(f, "bitcode(d={distance})"),
            BenchmarkSpec::PhaseCode { distance } => write!(f, "phasecode(d={distance})"),
            BenchmarkSpec::Bv { secret } => write!(f, "bv(secret={secret})"),
        }
    }
}

fn push_all(c: &mut Circuit, ops: impl IntoIterator<Item = Operation>) -> Result<()> {
    ops.into_iter().try_for_each(|op| c.push(op))
}

fn measure_all(c: &mut Circuit) -> Result<()> {
    for q in 0..c.n_qubits() {
        c.push(Operation::measure(q))?;
    }
    Ok(())
}

/// `p` layers of an RX mixer on every qubit followed by ZZ(gamma)
/// interactions around a ring, each as CNOT-RZ-CNOT. One `(beta, gamma)`
/// pair per layer, uniform in `[0, 2pi)`.
pub fn gen_qaoa(n: usize, layers: usize, seed: u64) -> Result<Circuit> {
    if n < 2 || layers < 1 {
        return Err(TusqError::InvalidInput(format!(
            "qaoa needs n >= 2 and p >= 1, got n={n}, p={layers}"
        )));
    }
    let mut angles = rng::stream(seed, b"qaoa-angles");
    let edges: Vec<(usize, usize)> = if n == 2 {
        vec![(0, 1)]
    } else {
        (0..n).map(|i| (i, (i + 1) % n)).collect()
    };
    let mut c = Circuit::new(n);
    for _ in 0..layers {
        let beta = angles.gen_range(0.0..TAU);
        let gamma = angles.gen_range(0.0..TAU);
        for q in 0..n {
            c.push(Operation::rotation(GateKind::Rx, q, beta))?;
        }
        for &(a, b) in &edges {
            push_all(
                &mut c,
                [
                    Operation::cnot(a, b),
                    Operation::rotation(GateKind::Rz, b, gamma),
                    Operation::cnot(a, b),
                ],
            )?;
        }
    }
    measure_all(&mut c)?;
    Ok(c)
}

/// Toffoli in the CNOT + T basis.
fn toffoli(c1: usize, c2: usize, t: usize) -> Vec<Operation> {
    use GateKind::*;
    vec![
        Operation::single(H, t),
        Operation::cnot(c2, t),
        Operation::single(Tdg, t),
        Operation::cnot(c1, t),
        Operation::single(T, t),
        Operation::cnot(c2, t),
        Operation::single(Tdg, t),
        Operation::cnot(c1, t),
        Operation::single(T, c2),
        Operation::single(T, t),
        Operation::single(H, t),
        Operation::cnot(c1, c2),
        Operation::single(T, c1),
        Operation::single(Tdg, c2),
        Operation::cnot(c1, c2),
    ]
}

fn maj(c: usize, b: usize, a: usize) -> Vec<Operation> {
    let mut ops = vec![Operation::cnot(a, b), Operation::cnot(a, c)];
    ops.extend(toffoli(c, b, a));
    ops
}

fn uma(c: usize, b: usize, a: usize) -> Vec<Operation> {
    let mut ops = toffoli(c, b, a);
    ops.push(Operation::cnot(a, c));
    ops.push(Operation::cnot(c, b));
    ops
}

/// Operand width of an `n`-qubit adder.
pub fn adder_width(n: usize) -> Result<usize> {
    if n < 5 || n.is_multiple_of(2) {
        return Err(TusqError::InvalidInput(format!(
            "adder needs an odd qubit count >= 5, got {n}"
        )));
    }
    Ok((n - 1) / 2)
}

/// Ripple-carry adder with all-ones `a` and `b = 1`, so the carry runs the
/// full length of the register.
pub fn gen_adder(n: usize) -> Result<Circuit> {
    let k = adder_width(n)?;
    gen_adder_with(n, (1u64 << k) - 1, 1)
}

/// `b <- a + b mod 2^k` on `n = 2k + 1` qubits. Qubit 0 is the carry
/// ancilla, `b_i` is qubit `1 + 2i`, `a_i` is qubit `2 + 2i`. Only the `b`
/// register is measured, so the output reads the sum most significant bit
/// first.
pub fn gen_adder_with(n: usize, a: u64, b: u64) -> Result<Circuit> {
    let k = adder_width(n)?;
    if k < 64 && (a >> k != 0 || b >> k != 0) {
        return Err(TusqError::InvalidInput(format!(
            "operands {a} and {b} do not fit in {k} bits"
        )));
    }
    let bq = |i: usize| 1 + 2 * i;
    let aq = |i: usize| 2 + 2 * i;
    let mut c = Circuit::new(n);
    for i in 0..k {
        if (a >> i) & 1 == 1 {
            c.push(Operation::single(GateKind::X, aq(i)))?;
        }
        if (b >> i) & 1 == 1 {
            c.push(Operation::single(GateKind::X, bq(i)))?;
        }
    }
    push_all(&mut c, maj(0, bq(0), aq(0)))?;
    for i in 1..k {
        push_all(&mut c, maj(aq(i - 1), bq(i), aq(i)))?;
    }
    for i in (1..k).rev() {
        push_all(&mut c, uma(aq(i - 1), bq(i), aq(i)))?;
    }
    push_all(&mut c, uma(0, bq(0), aq(0)))?;
    for i in 0..k {
        c.push(Operation::measure(bq(i)))?;
    }
    Ok(c)
}

pub fn gen_ghz(n: usize) -> Result<Circuit> {
    if n < 2 {
        return Err(TusqError::InvalidInput(format!("ghz needs n >= 2, got {n}")));
    }
    let mut c = Circuit::new(n);
    c.push(Operation::single(GateKind::H, 0))?;
    for i in 1..n {
        c.push(Operation::cnot(0, i))?;
    }
    measure_all(&mut c)?;
    Ok(c)
}

fn code_size(d: usize) -> Result<usize> {
    if d < 1 {
        return Err(TusqError::InvalidInput("code distance must be >= 1".into()));
    }
    Ok(4 * d + 1)
}

/// Repetition code: data on even qubits, parity ancillas on odd qubits
/// between them; each round copies neighbouring data parities onto the
/// ancillas.
pub fn gen_bit_code(d: usize) -> Result<Circuit> {
    let n = code_size(d)?;
    let mut c = Circuit::new(n);
    for _ in 0..d {
        for j in 0..2 * d {
            let a = 2 * j + 1;
            push_all(&mut c, [Operation::cnot(2 * j, a), Operation::cnot(2 * j + 2, a)])?;
        }
    }
    measure_all(&mut c)?;
    Ok(c)
}

/// Phase-flip variant: data prepared in `|+>`, X-type checks through
/// Hadamard-conjugated ancillas, data rotated back before readout.
pub fn gen_phase_code(d: usize) -> Result<Circuit> {
    let n = code_size(d)?;
    let mut c = Circuit::new(n);
    for q in (0..n).step_by(2) {
        c.push(Operation::single(GateKind::H, q))?;
    }
    for _ in 0..d {
        for j in 0..2 * d {
            let a = 2 * j + 1;
            push_all(
                &mut c,
                [
                    Operation::single(GateKind::H, a),
                    Operation::cnot(a, 2 * j),
                    Operation::cnot(a, 2 * j + 2),
                    Operation::single(GateKind::H, a),
                ],
            )?;
        }
    }
    for q in (0..n).step_by(2) {
        c.push(Operation::single(GateKind::H, q))?;
    }
    measure_all(&mut c)?;
    Ok(c)
}

/// Bernstein-Vazirani on `secret.len() + 1` qubits; the last qubit is the
/// phase ancilla. The noiseless output equals `secret`.
pub fn gen_bv(secret: &str) -> Result<Circuit> {
    if secret.is_empty() || !secret.chars().all(|ch| ch == '0' || ch == '1') {
        return Err(TusqError::InvalidInput(format!(
            "bv secret must be a non-empty bitstring, got {secret:?}"
        )));
    }
    let m = secret.len();
    let anc = m;
    let mut c = Circuit::new(m + 1);
    c.push(Operation::single(GateKind::X, anc))?;
    for q in 0..=m {
        c.push(Operation::single(GateKind::H, q))?;
    }
    for (j, ch) in secret.chars().enumerate() {
        if ch == '1' {
            c.push(Operation::cnot(m - 1 - j, anc))?;
        }
    }
    for q in 0..m {
        c.push(Operation::single(GateKind::H, q))?;
    }
    for q in 0..m {
        c.push(Operation::measure(q))?;
    }
    Ok(c)
}

/// `time_b / time_a`: how many times faster protocol A ran.
pub fn speedup(time_b: f64, time_a: f64) -> Result<f64> {
    if !(time_a > 0.0 && time_b > 0.0) {
        return Err(TusqError::InvalidInput(format!(
            "times must be positive, got {time_b} and {time_a}"
        )));
    }
    Ok(time_b / time_a)
}

/// `|f_a - f_b| / (f_a + f_b)`.
pub fn rel_fidelity_diff(f_a: f64, f_b: f64) -> Result<f64> {
    if !(f_a > 0.0 && f_b > 0.0 && f_a <= 1.0 + 1e-12 && f_b <= 1.0 + 1e-12) {
        return Err(TusqError::InvalidInput(format!(
            "fidelities must lie in (0, 1], got {f_a} and {f_b}"
        )));
    }
    Ok((f_a - f_b).abs() / (f_a + f_b))
}
