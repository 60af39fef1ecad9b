//! Error-realization tallying and canonicalization by Pauli commutation.
//!
//! A realization is canonicalized in one forward pass. Each qubit carries a
//! pending Pauli and an *anchor*, the latest noise site on that qubit. Noise
//! multiplies into the pending Pauli; a gate either conjugates it onward (the
//! next noise site becomes the anchor) or blocks it, in which case the
//! pending Pauli is written back at its anchor. The result is again a
//! realization over the same sites, so canonical forms feed the execution
//! tree directly.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rand::Rng;

use crate::circuit::{Circuit, GateKind, Operation};
use crate::error::{Result, TusqError};
use crate::noise::{sample_er_into, ErrorRealization, NoisyCircuit};
use crate::pauli::Pauli;

/// Shot counts per key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tally<K: Ord> {
    entries: BTreeMap<K, u64>,
    total_shots: u64,
}

pub type ErTally = Tally<ErrorRealization>;
pub type CanonicalTally = Tally<CanonicalEr>;

impl<K: Ord> Default for Tally<K> {
    fn default() -> Self {
        Tally {
            entries: BTreeMap::new(),
            total_shots: 0,
        }
    }
}

impl<K: Ord> Tally<K> {
    pub fn new() -> Self {
        Tally::default()
    }

    pub fn add(&mut self, key: K, count: u64) {
        if count == 0 {
            return;
        }
        *self.entries.entry(key).or_insert(0) += count;
        self.total_shots += count;
    }

    pub fn get(&self, key: &K) -> u64 {
        self.entries.get(key).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_shots(&self) -> u64 {
        self.total_shots
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, u64)> {
        self.entries.iter().map(|(k, &c)| (k, c))
    }

    pub fn max_count(&self) -> u64 {
        self.entries.values().copied().max().unwrap_or(0)
    }

    /// Key-wise sum, for tallies built in shards.
    pub fn merge(&mut self, other: Tally<K>) {
        for (k, c) in other.entries {
            self.add(k, c);
        }
    }
}

impl<K: Ord> FromIterator<(K, u64)> for Tally<K> {
    fn from_iter<T: IntoIterator<Item = (K, u64)>>(iter: T) -> Self {
        let mut t = Tally::new();
        for (k, c) in iter {
            t.add(k, c);
        }
        t
    }
}

/// Draws `shots` realizations and counts repeats.
pub fn tally_ers<R: Rng + ?Sized>(noisy: &NoisyCircuit, shots: u64, rng: &mut R) -> ErTally {
    let mut counts: HashMap<ErrorRealization, u64> = HashMap::new();
    let mut er = ErrorRealization::identity(noisy.n_sites());
    for _ in 0..shots {
        sample_er_into(&noisy.channels, rng, &mut er);
        match counts.get_mut(&er) {
            Some(c) => *c += 1,
            None => {
                counts.insert(er.clone(), 1);
            }
        }
    }
    counts.into_iter().collect()
}

/// A realization after maximal rightward commutation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalEr(ErrorRealization);

impl CanonicalEr {
    /// Treats `er` as already canonical; used when commutation is disabled.
    pub fn from_raw(er: ErrorRealization) -> Self {
        CanonicalEr(er)
    }

    pub fn as_er(&self) -> &ErrorRealization {
        &self.0
    }

    pub fn into_er(self) -> ErrorRealization {
        self.0
    }

    /// `(op index, qubit, pauli)` triples of the surviving Paulis in
    /// circuit order.
    pub fn residuals(&self, circuit: &Circuit) -> Vec<(usize, usize, Pauli)> {
        self.0
            .support()
            .map(|(s, p)| {
                let info = circuit.sites()[s];
                (info.op_index, info.qubit, p)
            })
            .collect()
    }
}

impl fmt::Display for CanonicalEr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Which operand of a gate a Pauli sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QubitRole {
    Single,
    Control,
    Target,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PushOutcome {
    /// The Pauli moves past the gate and becomes these `(qubit, pauli)`.
    Through(Vec<(usize, Pauli)>),
    Blocked,
}

/// Moves `pauli`, sitting just before `gate` on the operand `role`, to just
/// after it. Phases are dropped.
pub fn push_rule(pauli: Pauli, gate: &Operation, role: QubitRole) -> PushOutcome {
    use Pauli::*;
    if pauli == I {
        return PushOutcome::Through(Vec::new());
    }
    if gate.kind == GateKind::Cnot {
        let (c, t) = (gate.qubits[0], gate.qubits[1]);
        let out = match (role, pauli) {
            (QubitRole::Control, X) => vec![(c, X), (t, X)],
            (QubitRole::Control, Y) => vec![(c, Y), (t, X)],
            (QubitRole::Control, Z) => vec![(c, Z)],
            (QubitRole::Target, X) => vec![(t, X)],
            (QubitRole::Target, Y) => vec![(c, Z), (t, Y)],
            (QubitRole::Target, Z) => vec![(c, Z), (t, Z)],
            _ => return PushOutcome::Blocked,
        };
        return PushOutcome::Through(out);
    }
    if role != QubitRole::Single {
        return PushOutcome::Blocked;
    }
    let q = gate.qubits[0];
    let moved = match gate.kind {
        GateKind::I | GateKind::X | GateKind::Y | GateKind::Z => Some(pauli),
        GateKind::H => Some(match pauli {
            X => Z,
            Z => X,
            other => other,
        }),
        GateKind::S | GateKind::Sdg | GateKind::T | GateKind::Tdg | GateKind::Rz => {
            (pauli == Z).then_some(Z)
        }
        GateKind::Rx => (pauli == X).then_some(X),
        GateKind::Ry => (pauli == Y).then_some(Y),
        GateKind::Cnot | GateKind::Measure => None,
    };
    match moved {
        Some(p) => PushOutcome::Through(vec![(q, p)]),
        None => PushOutcome::Blocked,
    }
}

/// Per-circuit lookup reused across many canonicalizations.
#[derive(Debug, Clone)]
pub struct Commuter {
    n_qubits: usize,
    n_sites: usize,
    /// `(op index, qubit)` -> whether the next operation on that qubit is a
    /// noise site. Only filled for gates.
    site_follows: HashMap<(usize, usize), bool>,
    drop_unmeasured: Vec<bool>,
}

impl Commuter {
    pub fn new(circuit: &Circuit) -> Self {
        let mut site_follows = HashMap::new();
        let mut last_gate: Vec<Option<usize>> = vec![None; circuit.n_qubits()];
        for (i, op) in circuit.ops().iter().enumerate() {
            for &q in &op.qubits {
                if let Some(g) = last_gate[q].take() {
                    site_follows.insert((g, q), op.is_noise_site());
                }
                if !op.is_noise_site() && op.kind.is_unitary() {
                    last_gate[q] = Some(i);
                }
            }
        }
        for (q, g) in last_gate.iter().enumerate() {
            if let Some(g) = g {
                site_follows.insert((*g, q), false);
            }
        }
        let has_meas = circuit.has_measurements();
        let drop_unmeasured = (0..circuit.n_qubits())
            .map(|q| has_meas && !circuit.is_measured(q))
            .collect();
        Commuter {
            n_qubits: circuit.n_qubits(),
            n_sites: circuit.n_sites(),
            site_follows,
            drop_unmeasured,
        }
    }

    pub fn canonicalize(&self, circuit: &Circuit, er: &ErrorRealization) -> Result<CanonicalEr> {
        if er.len() != self.n_sites || circuit.n_sites() != self.n_sites {
            return Err(TusqError::SiteCount {
                expected: self.n_sites,
                got: er.len(),
            });
        }
        let mut out = ErrorRealization::identity(self.n_sites);
        if er.is_identity() {
            return Ok(CanonicalEr(out));
        }
        let mut pending = vec![Pauli::I; self.n_qubits];
        let mut anchor: Vec<Option<usize>> = vec![None; self.n_qubits];

        let flush = |out: &mut ErrorRealization, p: Pauli, anchor: Option<usize>| {
            if p.is_identity() {
                return;
            }
            let s = anchor.expect("a pending Pauli always has an anchor site");
            out.set(s, out.get(s) * p);
        };

        for (i, op) in circuit.ops().iter().enumerate() {
            if let Some(site) = op.noise_site {
                let q = op.qubits[0];
                pending[q] = pending[q] * er.get(site.index());
                anchor[q] = Some(site.index());
                continue;
            }
            match op.kind {
                GateKind::Measure => {
                    let q = op.qubits[0];
                    let p = pending[q].x_part();
                    flush(&mut out, p, anchor[q]);
                    pending[q] = Pauli::I;
                }
                GateKind::Cnot => {
                    let (c, t) = (op.qubits[0], op.qubits[1]);
                    if pending[c].is_identity() && pending[t].is_identity() {
                        continue;
                    }
                    let mut moved = [Pauli::I; 2];
                    let mut ok = true;
                    for (role, q) in [(QubitRole::Control, c), (QubitRole::Target, t)] {
                        match push_rule(pending[q], op, role) {
                            PushOutcome::Through(list) => {
                                for (dest, p) in list {
                                    let k = usize::from(dest == t);
                                    moved[k] = moved[k] * p;
                                }
                            }
                            PushOutcome::Blocked => ok = false,
                        }
                    }
                    for (k, q) in [c, t].into_iter().enumerate() {
                        if !moved[k].is_identity() && !self.site_follows[&(i, q)] {
                            ok = false;
                        }
                    }
                    if ok {
                        pending[c] = moved[0];
                        pending[t] = moved[1];
                    } else {
                        for q in [c, t] {
                            flush(&mut out, pending[q], anchor[q]);
                            pending[q] = Pauli::I;
                        }
                    }
                }
                _ => {
                    let q = op.qubits[0];
                    if pending[q].is_identity() {
                        continue;
                    }
                    match push_rule(pending[q], op, QubitRole::Single) {
                        PushOutcome::Through(list) if self.site_follows[&(i, q)] => {
                            pending[q] = list.first().map_or(Pauli::I, |&(_, p)| p);
                        }
                        _ => {
                            flush(&mut out, pending[q], anchor[q]);
                            pending[q] = Pauli::I;
                        }
                    }
                }
            }
        }
        for q in 0..self.n_qubits {
            if !self.drop_unmeasured[q] {
                flush(&mut out, pending[q], anchor[q]);
            }
        }
        Ok(CanonicalEr(out))
    }
}

pub fn commute_er(circuit: &Circuit, er: &ErrorRealization) -> Result<CanonicalEr> {
    Commuter::new(circuit).canonicalize(circuit, er)
}

/// Merges realizations that share a canonical form.
pub fn reduce_tally(circuit: &Circuit, tally: &ErTally) -> Result<CanonicalTally> {
    let commuter = Commuter::new(circuit);
    let mut out = CanonicalTally::new();
    for (er, count) in tally.iter() {
        out.add(commuter.canonicalize(circuit, er)?, count);
    }
    Ok(out)
}

/// Reinterprets a raw tally without commuting.
pub fn identity_reduction(tally: &ErTally) -> CanonicalTally {
    tally
        .iter()
        .map(|(er, c)| (CanonicalEr::from_raw(er.clone()), c))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::StateVector;
    use crate::noise::{attach_noise, NoiseSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// H on qubit 0 then CNOT(0, 1), with noise after both.
    fn cnot_h_circuit() -> NoisyCircuit {
        let mut c = Circuit::new(2);
        c.push(Operation::single(GateKind::H, 0)).unwrap();
        c.push(Operation::cnot(0, 1)).unwrap();
        attach_noise(&c, &NoiseSpec::depolarizing(0.1, 0.0).unwrap()).unwrap()
    }

    fn run_with_er(circuit: &Circuit, er: &ErrorRealization) -> StateVector {
        let mut s = StateVector::zero(circuit.n_qubits());
        for op in circuit.ops() {
            if let Some(site) = op.noise_site {
                s.apply_pauli(op.qubits[0], er.get(site.index()));
            } else if op.is_effective_gate() {
                s.apply_gate(op).unwrap();
            }
        }
        s
    }

    fn random_circuit(n: usize, len: usize, measure: bool, rng: &mut ChaCha8Rng) -> Circuit {
        let mut c = Circuit::new(n);
        let singles = [
            GateKind::X, GateKind::Y, GateKind::Z, GateKind::H, GateKind::S, GateKind::Sdg,
            GateKind::T, GateKind::Tdg,
        ];
        for _ in 0..len {
            let q = rng.gen_range(0..n);
            let op = match rng.gen_range(0..4) {
                0 if n > 1 => {
                    let t = (q + rng.gen_range(1..n)) % n;
                    Operation::cnot(q, t)
                }
                1 => {
                    let kind = [GateKind::Rx, GateKind::Ry, GateKind::Rz][rng.gen_range(0..3)];
                    Operation::rotation(kind, q, rng.gen_range(-3.0..3.0))
                }
                _ => Operation::single(singles[rng.gen_range(0..singles.len())], q),
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

    fn random_er(len: usize, rng: &mut ChaCha8Rng) -> ErrorRealization {
        let paulis: Vec<Pauli> = (0..len)
            .map(|_| if rng.gen_bool(0.3) { Pauli::from_bits(rng.gen_range(1..4)) } else { Pauli::I })
            .collect();
        ErrorRealization::from_paulis(&paulis)
    }

    #[test]
    fn canonical_placement_preserves_state() {
        let spec = NoiseSpec::depolarizing(0.1, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let n = rng.gen_range(1..=4);
            let len = rng.gen_range(0..=30);
            let noisy = attach_noise(&random_circuit(n, len, false, &mut rng), &spec).unwrap();
            let er = random_er(noisy.n_sites(), &mut rng);
            let can = commute_er(&noisy.circuit, &er).unwrap();
            let a = run_with_er(&noisy.circuit, &er);
            let b = run_with_er(&noisy.circuit, can.as_er());
            assert!(a.inner(&b).norm() >= 1.0 - 1e-9);
        }
    }

    #[test]
    fn canonical_placement_preserves_measured_marginals() {
        let spec = NoiseSpec::depolarizing(0.1, 0.1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..300 {
            let n = rng.gen_range(1..=4);
            let len = rng.gen_range(0..=25);
            let noisy = attach_noise(&random_circuit(n, len, true, &mut rng), &spec).unwrap();
            let er = random_er(noisy.n_sites(), &mut rng);
            let can = commute_er(&noisy.circuit, &er).unwrap();
            let measured = noisy.circuit.measured_qubits();
            let marginal = |s: &StateVector| {
                let mut m = std::collections::BTreeMap::new();
                for (i, p) in s.probabilities().into_iter().enumerate() {
                    *m.entry(crate::circuit::bitstring(i, &measured)).or_insert(0.0) += p;
                }
                m
            };
            let a = marginal(&run_with_er(&noisy.circuit, &er));
            let b = marginal(&run_with_er(&noisy.circuit, can.as_er()));
            for (k, pa) in &a {
                assert!((pa - b[k]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn canonicalization_is_idempotent() {
        let spec = NoiseSpec::depolarizing(0.1, 0.1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for trial in 0..300 {
            let n = rng.gen_range(1..=4);
            let len = rng.gen_range(0..=30);
            let noisy = attach_noise(&random_circuit(n, len, trial % 2 == 0, &mut rng), &spec).unwrap();
            let er = random_er(noisy.n_sites(), &mut rng);
            let once = commute_er(&noisy.circuit, &er).unwrap();
            let twice = commute_er(&noisy.circuit, once.as_er()).unwrap();
            assert_eq!(once, twice);
        }
    }

    #[test]
    fn rule_table() {
        use Pauli::*;
        let cx = Operation::cnot(0, 1);
        assert_eq!(
            push_rule(X, &cx, QubitRole::Control),
            PushOutcome::Through(vec![(0, X), (1, X)])
        );
        assert_eq!(push_rule(X, &cx, QubitRole::Target), PushOutcome::Through(vec![(1, X)]));
        assert_eq!(
            push_rule(Z, &cx, QubitRole::Target),
            PushOutcome::Through(vec![(0, Z), (1, Z)])
        );
        assert_eq!(push_rule(Z, &cx, QubitRole::Control), PushOutcome::Through(vec![(0, Z)]));
        assert_eq!(
            push_rule(Y, &cx, QubitRole::Control),
            PushOutcome::Through(vec![(0, Y), (1, X)])
        );
        assert_eq!(
            push_rule(Y, &cx, QubitRole::Target),
            PushOutcome::Through(vec![(0, Z), (1, Y)])
        );
        let rz = Operation::rotation(GateKind::Rz, 0, 0.3);
        assert_eq!(push_rule(X, &rz, QubitRole::Single), PushOutcome::Blocked);
        assert_eq!(push_rule(Z, &rz, QubitRole::Single), PushOutcome::Through(vec![(0, Z)]));
        let rx = Operation::rotation(GateKind::Rx, 0, 0.3);
        assert_eq!(push_rule(X, &rx, QubitRole::Single), PushOutcome::Through(vec![(0, X)]));
        assert_eq!(push_rule(Y, &rx, QubitRole::Single), PushOutcome::Blocked);
        let h = Operation::single(GateKind::H, 0);
        assert_eq!(push_rule(X, &h, QubitRole::Single), PushOutcome::Through(vec![(0, Z)]));
        assert_eq!(push_rule(Y, &h, QubitRole::Single), PushOutcome::Through(vec![(0, Y)]));
        let x = Operation::single(GateKind::X, 0);
        assert_eq!(push_rule(Z, &x, QubitRole::Single), PushOutcome::Through(vec![(0, Z)]));
    }

    /// Every rule must hold as an operator identity up to phase.
    #[test]
    fn rules_match_conjugation() {
        let gates = [
            Operation::single(GateKind::H, 0),
            Operation::single(GateKind::S, 0),
            Operation::single(GateKind::T, 0),
            Operation::single(GateKind::Y, 0),
            Operation::rotation(GateKind::Rx, 0, 0.9),
            Operation::rotation(GateKind::Ry, 0, 0.9),
            Operation::rotation(GateKind::Rz, 0, 0.9),
            Operation::cnot(0, 1),
            Operation::cnot(1, 0),
        ];
        for gate in &gates {
            for (role, q) in [
                (QubitRole::Single, 0),
                (QubitRole::Control, gate.qubits[0]),
                (QubitRole::Target, *gate.qubits.get(1).unwrap_or(&0)),
            ] {
                if (gate.kind == GateKind::Cnot) == (role == QubitRole::Single) {
                    continue;
                }
                for p in [Pauli::X, Pauli::Y, Pauli::Z] {
                    let PushOutcome::Through(list) = push_rule(p, gate, role) else {
                        continue;
                    };
                    for seed in 0..3 {
                        let mut rng = ChaCha8Rng::seed_from_u64(seed);
                        let amps = (0..4)
                            .map(|_| num_complex::Complex64::new(rng.gen(), rng.gen()))
                            .collect::<Vec<_>>();
                        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
                        let init = StateVector::from_amplitudes(
                            amps.into_iter().map(|a| a / norm).collect(),
                        )
                        .unwrap();
                        let mut before = init.clone();
                        before.apply_pauli(q, p);
                        before.apply_gate(gate).unwrap();
                        let mut after = init.clone();
                        after.apply_gate(gate).unwrap();
                        for &(dq, dp) in &list {
                            after.apply_pauli(dq, dp);
                        }
                        let overlap = before.inner(&after).norm();
                        assert!((overlap - 1.0).abs() < 1e-12, "{gate} {role:?} {p}");
                    }
                }
            }
        }
    }

    #[test]
    fn identity_er_has_no_residuals() {
        let noisy = cnot_h_circuit();
        let er = ErrorRealization::identity(noisy.n_sites());
        let can = commute_er(&noisy.circuit, &er).unwrap();
        assert!(can.as_er().is_identity());
        assert!(can.residuals(&noisy.circuit).is_empty());
    }

    #[test]
    fn x_before_cnot_equals_xx_after() {
        use Pauli::*;
        let noisy = cnot_h_circuit();
        // Sites: after H on 0, after CNOT on 0, after CNOT on 1.
        let early = ErrorRealization::from_paulis(&[X, I, I]);
        let late = ErrorRealization::from_paulis(&[I, X, X]);
        let a = commute_er(&noisy.circuit, &early).unwrap();
        let b = commute_er(&noisy.circuit, &late).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.as_er(), &late);

        let tally: ErTally = [(early, 7), (late, 3)].into_iter().collect();
        let reduced = reduce_tally(&noisy.circuit, &tally).unwrap();
        assert_eq!(reduced.len(), 1);
        assert_eq!(reduced.total_shots(), 10);
        assert_eq!(reduced.get(&a), 10);
    }

    #[test]
    fn blocked_pauli_stays_at_its_site() {
        use Pauli::*;
        let mut c = Circuit::new(1);
        c.push(Operation::single(GateKind::H, 0)).unwrap();
        c.push(Operation::rotation(GateKind::Rz, 0, 0.4)).unwrap();
        let noisy = attach_noise(&c, &NoiseSpec::depolarizing(0.1, 0.0).unwrap()).unwrap();
        let er = ErrorRealization::from_paulis(&[X, I]);
        let can = commute_er(&noisy.circuit, &er).unwrap();
        assert_eq!(can.as_er(), &er);
        assert_eq!(can.residuals(&noisy.circuit), vec![(1, 0, X)]);
        // Z passes the RZ and lands on the last site.
        let er = ErrorRealization::from_paulis(&[Z, I]);
        let can = commute_er(&noisy.circuit, &er).unwrap();
        assert_eq!(can.as_er(), &ErrorRealization::from_paulis(&[I, Z]));
    }

    #[test]
    fn z_before_measure_is_dropped() {
        use Pauli::*;
        let mut c = Circuit::new(1);
        c.push(Operation::single(GateKind::X, 0)).unwrap();
        c.push(Operation::measure(0)).unwrap();
        let noisy = attach_noise(&c, &NoiseSpec::depolarizing(0.1, 0.1).unwrap()).unwrap();
        let z = commute_er(&noisy.circuit, &ErrorRealization::from_paulis(&[Z, I])).unwrap();
        assert!(z.as_er().is_identity());
        let y = commute_er(&noisy.circuit, &ErrorRealization::from_paulis(&[Y, I])).unwrap();
        assert_eq!(y.as_er(), &ErrorRealization::from_paulis(&[I, X]));
        let xx = commute_er(&noisy.circuit, &ErrorRealization::from_paulis(&[X, X])).unwrap();
        assert!(xx.as_er().is_identity());
    }

    #[test]
    fn site_count_mismatch() {
        let noisy = cnot_h_circuit();
        assert!(matches!(
            commute_er(&noisy.circuit, &ErrorRealization::identity(2)),
            Err(TusqError::SiteCount { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn tally_counts_and_conservation() {
        let noisy = cnot_h_circuit();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let tally = tally_ers(&noisy, 20_000, &mut rng);
        assert_eq!(tally.total_shots(), 20_000);
        assert!(tally.len() < 20_000);
        assert!(tally.len() <= 64);
        let reduced = reduce_tally(&noisy.circuit, &tally).unwrap();
        assert_eq!(reduced.total_shots(), 20_000);
        assert!(reduced.len() <= tally.len());

        let quiet = attach_noise(&noisy.circuit.without_noise(), &NoiseSpec::noiseless()).unwrap();
        let tally = tally_ers(&quiet, 1000, &mut rng);
        assert_eq!(tally.len(), 1);
        assert_eq!(tally.iter().next().unwrap().1, 1000);
    }

    #[test]
    fn merge_shards() {
        let noisy = cnot_h_circuit();
        let mut a = tally_ers(&noisy, 500, &mut ChaCha8Rng::seed_from_u64(1));
        let b = tally_ers(&noisy, 700, &mut ChaCha8Rng::seed_from_u64(2));
        let keys = a.len().max(b.len());
        a.merge(b);
        assert_eq!(a.total_shots(), 1200);
        assert!(a.len() >= keys);
    }
}
