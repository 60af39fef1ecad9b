#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tusq_core::noise::ErrorRealization;
use tusq_core::{Circuit, GateKind, Operation, Pauli};

const SINGLES: [GateKind; 8] = [
    GateKind::X,
    GateKind::Y,
    GateKind::Z,
    GateKind::H,
    GateKind::S,
    GateKind::Sdg,
    GateKind::T,
    GateKind::Tdg,
];

/// Random circuit over the whole gate set; `measure` marks each qubit for
/// readout with probability 0.7.
pub fn random_circuit(n: usize, len: usize, measure: bool, rng: &mut ChaCha8Rng) -> Circuit {
    let mut c = Circuit::new(n);
    for _ in 0..len {
        let q = rng.gen_range(0..n);
        let op = match rng.gen_range(0..4) {
            0 if n > 1 => Operation::cnot(q, (q + rng.gen_range(1..n)) % n),
            1 => {
                let kind = [GateKind::Rx, GateKind::Ry, GateKind::Rz][rng.gen_range(0..3)];
                Operation::rotation(kind, q, rng.gen_range(-3.2..3.2))
            }
            _ => Operation::single(SINGLES[rng.gen_range(0..SINGLES.len())], q),
        };
        c.push(op).unwrap();
    }
    if measure {
        for q in 0..n {
            if rng.gen_bool(0.7) {
                c.push(Operation::measure(q)).unwrap();
            }
        }
    }
    c
}

/// Each site independently non-identity with probability `p`.
pub fn random_er(sites: usize, p: f64, rng: &mut ChaCha8Rng) -> ErrorRealization {
    let paulis: Vec<Pauli> = (0..sites)
        .map(|_| {
            if rng.gen_bool(p) {
                Pauli::ALL[rng.gen_range(1..4)]
            } else {
                Pauli::I
            }
        })
        .collect();
    ErrorRealization::from_paulis(&paulis)
}
