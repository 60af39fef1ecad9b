//! Distributions over measured bitstrings.

use std::collections::{BTreeMap, BTreeSet};

use crate::circuit::bitstring;

pub type Counts = BTreeMap<String, u64>;
pub type Distribution = BTreeMap<String, f64>;

/// Marginalizes full-register index counts onto `qubits`.
pub fn project_counts(counts: &BTreeMap<usize, u64>, qubits: &[usize]) -> Counts {
    let mut out = Counts::new();
    for (&index, &c) in counts {
        *out.entry(bitstring(index, qubits)).or_insert(0) += c;
    }
    out
}

/// Marginalizes full-register probabilities onto `qubits`, dropping
/// outcomes with zero probability.
pub fn project_probs(probs: &[f64], qubits: &[usize]) -> Distribution {
    let mut out = Distribution::new();
    for (index, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            *out.entry(bitstring(index, qubits)).or_insert(0.0) += p;
        }
    }
    out
}

pub fn normalize(counts: &Counts) -> Distribution {
    let total: u64 = counts.values().sum();
    if total == 0 {
        return Distribution::new();
    }
    counts
        .iter()
        .map(|(k, &c)| (k.clone(), c as f64 / total as f64))
        .collect()
}

fn keys<'a>(p: &'a Distribution, q: &'a Distribution) -> BTreeSet<&'a String> {
    p.keys().chain(q.keys()).collect()
}

/// Half the L1 distance.
pub fn total_variation(p: &Distribution, q: &Distribution) -> f64 {
    0.5 * keys(p, q)
        .into_iter()
        .map(|k| (p.get(k).unwrap_or(&0.0) - q.get(k).unwrap_or(&0.0)).abs())
        .sum::<f64>()
}

/// `(sum_k sqrt(p_k q_k))^2`.
pub fn classical_fidelity(p: &Distribution, q: &Distribution) -> f64 {
    let bc: f64 = p
        .iter()
        .filter_map(|(k, &pk)| q.get(k).map(|&qk| (pk * qk).sqrt()))
        .sum();
    bc * bc
}

pub fn max_abs_difference(p: &Distribution, q: &Distribution) -> f64 {
    keys(p, q)
        .into_iter()
        .map(|k| (p.get(k).unwrap_or(&0.0) - q.get(k).unwrap_or(&0.0)).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(entries: &[(&str, f64)]) -> Distribution {
        entries.iter().map(|&(k, v)| (k.to_string(), v)).collect()
    }

    #[test]
    fn projection_marginalizes() {
        let counts: BTreeMap<usize, u64> = [(0b000, 3), (0b010, 4), (0b101, 5)].into_iter().collect();
        let c = project_counts(&counts, &[0, 2]);
        assert_eq!(c, [("00".to_string(), 7), ("11".to_string(), 5)].into_iter().collect());
        let p = project_probs(&[0.5, 0.0, 0.25, 0.25], &[1]);
        assert_eq!(p, d(&[("0", 0.5), ("1", 0.5)]));
    }

    #[test]
    fn metrics() {
        let p = d(&[("0", 0.5), ("1", 0.5)]);
        let q = d(&[("0", 1.0)]);
        assert!((total_variation(&p, &q) - 0.5).abs() < 1e-15);
        assert!((classical_fidelity(&p, &q) - 0.5).abs() < 1e-15);
        assert!((classical_fidelity(&p, &p) - 1.0).abs() < 1e-15);
        assert_eq!(total_variation(&p, &p), 0.0);
        assert!((max_abs_difference(&p, &q) - 0.5).abs() < 1e-15);
        let counts: Counts = [("0".to_string(), 1), ("1".to_string(), 3)].into_iter().collect();
        assert_eq!(normalize(&counts), d(&[("0", 0.25), ("1", 0.75)]));
    }
}
