//! Reference engines for small circuits: exact density-matrix evolution,
//! per-shot statevector simulation, and the pruning error bound.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::circuit::{Circuit, GateKind, Operation, StateVector};
use crate::ecm::CanonicalEr;
use crate::error::{Result, TusqError};
use crate::noise::{sample_er_into, ErrorRealization, NoisyCircuit, PauliChannel};
use crate::pauli::Pauli;
use crate::rng;
use crate::tem::PruningPartition;

pub const MAX_DMS_QUBITS: usize = 12;

/// `rho` stored as a `2n`-qubit vector: entry `(r, c)` lives at index
/// `r | c << n`, so a gate on qubit `q` acts on the row through bit `q` and,
/// conjugated, on the column through bit `q + n`.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    n_qubits: usize,
    vec: StateVector,
}

impl DensityMatrix {
    pub fn zero(n_qubits: usize) -> Result<Self> {
        if n_qubits > MAX_DMS_QUBITS {
            return Err(TusqError::OracleCapacity {
                n_qubits,
                max: MAX_DMS_QUBITS,
            });
        }
        Ok(DensityMatrix {
            n_qubits,
            vec: StateVector::zero(2 * n_qubits),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.vec.amplitudes()[row | (col << self.n_qubits)]
    }

    pub fn trace(&self) -> Complex64 {
        (0..1 << self.n_qubits).map(|k| self.get(k, k)).sum()
    }

    /// `P(k) = <k|rho|k>`.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..1 << self.n_qubits).map(|k| self.get(k, k).re).collect()
    }

    pub fn apply_unitary(&mut self, op: &Operation) -> Result<()> {
        self.vec.apply_gate(op)?;
        let n = self.n_qubits;
        let shifted: Vec<usize> = op.qubits.iter().map(|q| q + n).collect();
        // Column side: conj(U). Rotations about X and Z flip their angle,
        // S and T swap with their adjoints, and conj(Y) = -Y.
        let conj_kind = match op.kind {
            GateKind::S => GateKind::Sdg,
            GateKind::Sdg => GateKind::S,
            GateKind::T => GateKind::Tdg,
            GateKind::Tdg => GateKind::T,
            k => k,
        };
        let params = match op.kind {
            GateKind::Rx | GateKind::Rz => vec![-op.angle()],
            _ => op.params.clone(),
        };
        self.vec
            .apply_gate(&Operation::new(conj_kind, shifted, params)?)?;
        if op.kind == GateKind::Y {
            self.vec.amplitudes_mut().iter_mut().for_each(|a| *a = -*a);
        }
        Ok(())
    }

    /// `rho -> sum_P p_P P rho P`.
    pub fn apply_channel(&mut self, qubit: usize, ch: &PauliChannel) {
        if ch.is_identity() {
            return;
        }
        let [pi, px, py, pz] = ch.probs();
        let (keep_diag, swap_diag) = (pi + pz, px + py);
        let (keep_off, swap_off) = (pi - pz, px - py);
        let rbit = 1usize << qubit;
        let cbit = 1usize << (qubit + self.n_qubits);
        let amps = self.vec.amplitudes_mut();
        for base in 0..amps.len() {
            if base & (rbit | cbit) != 0 {
                continue;
            }
            let (i00, i11) = (base, base | rbit | cbit);
            let (i01, i10) = (base | cbit, base | rbit);
            let (a00, a11, a01, a10) = (amps[i00], amps[i11], amps[i01], amps[i10]);
            amps[i00] = a00 * keep_diag + a11 * swap_diag;
            amps[i11] = a11 * keep_diag + a00 * swap_diag;
            amps[i01] = a01 * keep_off + a10 * swap_off;
            amps[i10] = a10 * keep_off + a01 * swap_off;
        }
    }
}

/// Exact output probabilities over the full register.
pub fn dms_run(noisy: &NoisyCircuit) -> Result<Vec<f64>> {
    let circuit = &noisy.circuit;
    let mut rho = DensityMatrix::zero(circuit.n_qubits())?;
    for op in circuit.ops() {
        if let Some(site) = op.noise_site {
            rho.apply_channel(op.qubits[0], &noisy.channels[site.index()]);
        } else if op.is_effective_gate() {
            rho.apply_unitary(op)?;
        }
    }
    Ok(rho.diagonal())
}

/// Runs `circuit` from `|0...0>` with `er`'s Paulis at the noise sites.
pub fn run_with_er(circuit: &Circuit, er: &ErrorRealization) -> Result<StateVector> {
    let mut state = StateVector::zero(circuit.n_qubits());
    run_with_er_into(circuit, er, &mut state)?;
    Ok(state)
}

fn run_with_er_into(circuit: &Circuit, er: &ErrorRealization, state: &mut StateVector) -> Result<()> {
    if er.len() != circuit.n_sites() {
        return Err(TusqError::SiteCount {
            expected: circuit.n_sites(),
            got: er.len(),
        });
    }
    state.reset_zero();
    for op in circuit.ops() {
        if let Some(site) = op.noise_site {
            let p = er.get(site.index());
            if p != Pauli::I {
                state.apply_pauli(op.qubits[0], p);
            }
        } else if op.is_effective_gate() {
            state.apply_gate(op)?;
        }
    }
    Ok(())
}

/// Count-weighted mixture of exact per-realization output probabilities,
/// normalized by `total`.
pub fn exact_mixture(circuit: &Circuit, entries: &[(CanonicalEr, u64)], total: u64) -> Result<Vec<f64>> {
    let mut out = vec![0.0; 1 << circuit.n_qubits()];
    let mut state = StateVector::zero(circuit.n_qubits());
    for (key, count) in entries {
        run_with_er_into(circuit, key.as_er(), &mut state)?;
        let w = *count as f64 / total as f64;
        for (o, a) in out.iter_mut().zip(state.amplitudes()) {
            *o += w * a.norm_sqr();
        }
    }
    Ok(out)
}

/// One fresh simulation per shot: sample a realization, run the whole
/// circuit, draw one outcome. Counts are keyed by full basis index.
pub fn naive_svs(noisy: &NoisyCircuit, shots: u64, seed: u64) -> Result<BTreeMap<usize, u64>> {
    let mut stream = rng::stream(seed, rng::NAIVE);
    let mut counts = BTreeMap::new();
    let mut er = ErrorRealization::identity(noisy.n_sites());
    let mut state = StateVector::zero(noisy.circuit.n_qubits());
    for _ in 0..shots {
        sample_er_into(&noisy.channels, &mut stream, &mut er);
        run_with_er_into(&noisy.circuit, &er, &mut state)?;
        state.sample_into(1, &mut stream, &mut counts)?;
    }
    Ok(counts)
}

/// `(p0 / S) * alpha * (|I| + gamma * |K|)`: a bound on the largest
/// per-outcome probability change caused by pruning.
pub fn pruning_bound(partition: &PruningPartition) -> f64 {
    if partition.insig_count == 0 || partition.total_shots == 0 {
        return 0.0;
    }
    let gamma = partition.gamma.unwrap_or(0.0);
    let k = partition.selected_insignificant.len() as f64;
    partition.p0 as f64 / partition.total_shots as f64
        * partition.alpha
        * (partition.insig_count as f64 + gamma * k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::run_noiseless;
    use crate::noise::{attach_noise, NoiseSpec};
    use crate::tem::{partition_significant, PruningConfig};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_circuit(n: usize, len: usize, rng: &mut ChaCha8Rng) -> Circuit {
        let mut c = Circuit::new(n);
        let kinds = [
            GateKind::X, GateKind::Y, GateKind::Z, GateKind::H, GateKind::S, GateKind::Sdg,
            GateKind::T, GateKind::Tdg,
        ];
        for _ in 0..len {
            let q = rng.gen_range(0..n);
            let op = match rng.gen_range(0..4) {
                0 if n > 1 => Operation::cnot(q, (q + rng.gen_range(1..n)) % n),
                1 => {
                    let k = [GateKind::Rx, GateKind::Ry, GateKind::Rz][rng.gen_range(0..3)];
                    Operation::rotation(k, q, rng.gen_range(-3.0..3.0))
                }
                _ => Operation::single(kinds[rng.gen_range(0..kinds.len())], q),
            };
            c.push(op).unwrap();
        }
        c
    }

    #[test]
    fn noiseless_ghz() {
        let mut c = Circuit::new(2);
        c.push(Operation::single(GateKind::H, 0)).unwrap();
        c.push(Operation::cnot(0, 1)).unwrap();
        let noisy = attach_noise(&c, &NoiseSpec::noiseless()).unwrap();
        let p = dms_run(&noisy).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-12 && (p[3] - 0.5).abs() < 1e-12);
        assert!(p[1].abs() < 1e-12 && p[2].abs() < 1e-12);
    }

    #[test]
    fn depolarized_x_gate() {
        let mut c = Circuit::new(1);
        c.push(Operation::single(GateKind::X, 0)).unwrap();
        c.push(Operation::measure(0)).unwrap();
        for p in [0.01, 0.1, 0.3] {
            let noisy = attach_noise(&c, &NoiseSpec::depolarizing(p, 0.0).unwrap()).unwrap();
            let probs = dms_run(&noisy).unwrap();
            assert!((probs[0] - 2.0 * p / 3.0).abs() < 1e-12);
            assert!((probs[1] - (1.0 - 2.0 * p / 3.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn capacity_limit() {
        assert!(matches!(
            DensityMatrix::zero(13),
            Err(TusqError::OracleCapacity { n_qubits: 13, max: 12 })
        ));
    }

    #[test]
    fn noiseless_dms_matches_statevector() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let n = rng.gen_range(1..=4);
            let c = random_circuit(n, 25, &mut rng);
            let noisy = attach_noise(&c, &NoiseSpec::noiseless()).unwrap();
            let p = dms_run(&noisy).unwrap();
            let s = run_noiseless(&c, &StateVector::zero(n)).unwrap();
            for (a, b) in p.iter().zip(s.probabilities()) {
                assert!((a - b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn density_matrix_stays_physical() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let c = random_circuit(3, 30, &mut rng);
        let noisy = attach_noise(&c, &NoiseSpec::depolarizing(0.05, 0.0).unwrap()).unwrap();
        let mut rho = DensityMatrix::zero(3).unwrap();
        for op in noisy.circuit.ops() {
            if let Some(site) = op.noise_site {
                rho.apply_channel(op.qubits[0], &noisy.channels[site.index()]);
            } else if op.is_effective_gate() {
                rho.apply_unitary(op).unwrap();
            }
        }
        assert!((rho.trace() - 1.0).norm() < 1e-9);
        for r in 0..8 {
            for c in 0..8 {
                assert!((rho.get(r, c) - rho.get(c, r).conj()).norm() < 1e-9);
            }
            assert!(rho.get(r, r).re >= -1e-9);
        }
    }

    /// The density-matrix result equals the probability-weighted mixture over
    /// every realization.
    #[test]
    fn dms_equals_enumerated_mixture() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for trial in 0..20 {
            let n = 1 + trial % 3;
            // Few enough gates that the site count stays at or below 6.
            let mut c = random_circuit(n, 3, &mut rng);
            while c.ops().iter().map(|o| o.qubits.len()).sum::<usize>() + n > 6 {
                c = random_circuit(n, 2, &mut rng);
            }
            for q in 0..n {
                c.push(Operation::measure(q)).unwrap();
            }
            let noisy = attach_noise(&c, &NoiseSpec::depolarizing(0.2, 0.1).unwrap()).unwrap();
            let sites = noisy.n_sites();
            let mut mix = vec![0.0; 1 << n];
            for code in 0..4usize.pow(sites as u32) {
                let ps: Vec<Pauli> = (0..sites).map(|s| Pauli::from_bits((code >> (2 * s)) as u8)).collect();
                let w: f64 = ps.iter().zip(&noisy.channels).map(|(&p, ch)| ch.prob(p)).product();
                if w == 0.0 {
                    continue;
                }
                let s = run_with_er(&noisy.circuit, &ErrorRealization::from_paulis(&ps)).unwrap();
                for (m, a) in mix.iter_mut().zip(s.amplitudes()) {
                    *m += w * a.norm_sqr();
                }
            }
            let p = dms_run(&noisy).unwrap();
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            for (a, b) in p.iter().zip(&mix) {
                assert!((a - b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn naive_noiseless_is_plain_sampling() {
        let mut c = Circuit::new(2);
        c.push(Operation::single(GateKind::X, 1)).unwrap();
        let noisy = attach_noise(&c, &NoiseSpec::noiseless()).unwrap();
        let counts = naive_svs(&noisy, 500, 1).unwrap();
        assert_eq!(counts, [(2usize, 500u64)].into_iter().collect());
    }

    #[test]
    fn worked_bound_example() {
        let keys: Vec<CanonicalEr> = (0..6)
            .map(|i| {
                let ps: Vec<Pauli> = (0..3).map(|s| Pauli::from_bits((i >> (2 * s)) as u8)).collect();
                CanonicalEr::from_raw(ErrorRealization::from_paulis(&ps))
            })
            .collect();
        let tally = keys.iter().cloned().zip([800, 100, 50, 42, 5, 3]).collect();
        let cfg = PruningConfig { alpha: 0.01, beta: 1, ..Default::default() };
        // Find a seed that selects the 5-count entry.
        let part = (0..100)
            .map(|s| partition_significant(&tally, &cfg, &mut ChaCha8Rng::seed_from_u64(s)).unwrap())
            .find(|p| p.selected_original == vec![5])
            .unwrap();
        assert!((part.gamma.unwrap() - 1.6).abs() < 1e-15);
        assert!((pruning_bound(&part) - 0.0288).abs() < 1e-12);

        let single: crate::ecm::CanonicalTally = [(keys[0].clone(), 10)].into_iter().collect();
        let part = partition_significant(&single, &cfg, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert_eq!(pruning_bound(&part), 0.0);
    }
}
