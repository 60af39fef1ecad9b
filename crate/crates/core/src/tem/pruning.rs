use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::ecm::{CanonicalEr, CanonicalTally};
use crate::error::{Result, TusqError};

/// How the insignificant subsample is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Selection {
    /// Without replacement, weight proportional to shot count.
    #[default]
    Proportional,
    /// Without replacement, equal weights.
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PruningConfig {
    pub alpha: f64,
    pub beta: usize,
    #[serde(default)]
    pub selection: Selection,
}

impl Default for PruningConfig {
    fn default() -> Self {
        PruningConfig {
            alpha: 0.01,
            beta: 100,
            selection: Selection::Proportional,
        }
    }
}

impl PruningConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(TusqError::Config(format!(
                "alpha must lie in (0, 1], got {}",
                self.alpha
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PruningPartition {
    pub significant: Vec<(CanonicalEr, u64)>,
    /// Selected insignificant entries with their rescaled shot counts.
    pub selected_insignificant: Vec<(CanonicalEr, u64)>,
    /// Original counts of the selected entries, parallel to
    /// `selected_insignificant`.
    pub selected_original: Vec<u64>,
    /// `None` when nothing was insignificant.
    pub gamma: Option<f64>,
    pub p0: u64,
    pub threshold: f64,
    pub alpha: f64,
    pub insig_count: usize,
    pub insig_total: u64,
    pub total_shots: u64,
}

impl PruningPartition {
    /// Keeps every entry; the partition used when pruning is off.
    pub fn unpruned(tally: &CanonicalTally) -> Self {
        PruningPartition {
            significant: tally.iter().map(|(k, c)| (k.clone(), c)).collect(),
            selected_insignificant: Vec::new(),
            selected_original: Vec::new(),
            gamma: None,
            p0: tally.max_count(),
            threshold: 0.0,
            alpha: 0.0,
            insig_count: 0,
            insig_total: 0,
            total_shots: tally.total_shots(),
        }
    }

    /// Everything that will be executed, sorted by key.
    pub fn kept(&self) -> Vec<(CanonicalEr, u64)> {
        let mut out: Vec<(CanonicalEr, u64)> = self
            .significant
            .iter()
            .chain(&self.selected_insignificant)
            .filter(|(_, c)| *c > 0)
            .cloned()
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    pub fn kept_shots(&self) -> u64 {
        self.significant
            .iter()
            .chain(&self.selected_insignificant)
            .map(|(_, c)| c)
            .sum()
    }
}

/// Splits `tally` at `alpha * max_count` and replaces the insignificant part
/// with at most `beta` representatives scaled to the same total weight.
pub fn partition_significant<R: Rng + ?Sized>(
    tally: &CanonicalTally,
    cfg: &PruningConfig,
    rng: &mut R,
) -> Result<PruningPartition> {
    cfg.validate()?;
    if tally.is_empty() {
        return Err(TusqError::InvalidInput("cannot prune an empty tally".into()));
    }
    let p0 = tally.max_count();
    let threshold = cfg.alpha * p0 as f64;
    let mut significant = Vec::new();
    let mut insignificant = Vec::new();
    for (key, count) in tally.iter() {
        if count as f64 >= threshold {
            significant.push((key.clone(), count));
        } else {
            insignificant.push((key.clone(), count));
        }
    }
    let insig_count = insignificant.len();
    let insig_total: u64 = insignificant.iter().map(|(_, c)| c).sum();

    let chosen = select_insignificant(&insignificant, cfg.beta, cfg.selection, rng);
    let (selected_insignificant, selected_original, gamma) = if chosen.is_empty() {
        (Vec::new(), Vec::new(), None)
    } else {
        let selected_total: u64 = chosen.iter().map(|&i| insignificant[i].1).sum();
        let gamma = insig_total as f64 / selected_total as f64;
        let mut scaled: Vec<u64> = chosen
            .iter()
            .map(|&i| (gamma * insignificant[i].1 as f64).floor() as u64)
            .collect();
        let assigned: u64 = scaled.iter().sum();
        // Largest original count, first in key order on ties.
        let largest = (0..chosen.len())
            .max_by(|&a, &b| {
                insignificant[chosen[a]]
                    .1
                    .cmp(&insignificant[chosen[b]].1)
                    .then(b.cmp(&a))
            })
            .expect("non-empty selection");
        scaled[largest] += insig_total - assigned;
        let entries = chosen
            .iter()
            .zip(&scaled)
            .map(|(&i, &s)| (insignificant[i].0.clone(), s))
            .collect();
        let originals = chosen.iter().map(|&i| insignificant[i].1).collect();
        (entries, originals, Some(gamma))
    };

    Ok(PruningPartition {
        significant,
        selected_insignificant,
        selected_original,
        gamma,
        p0,
        threshold,
        alpha: cfg.alpha,
        insig_count,
        insig_total,
        total_shots: tally.total_shots(),
    })
}

/// Indices of `min(beta, len)` entries drawn without replacement, in key
/// order.
fn select_insignificant<R: Rng + ?Sized>(
    entries: &[(CanonicalEr, u64)],
    beta: usize,
    selection: Selection,
    rng: &mut R,
) -> Vec<usize> {
    let k = beta.min(entries.len());
    if k == 0 {
        return Vec::new();
    }
    let indices: Vec<usize> = (0..entries.len()).collect();
    let mut chosen: Vec<usize> = if k == entries.len() {
        indices
    } else {
        match selection {
            Selection::Proportional => indices
                .choose_multiple_weighted(rng, k, |&i| entries[i].1 as f64)
                .expect("counts are positive and finite")
                .copied()
                .collect(),
            Selection::Uniform => indices.choose_multiple(rng, k).copied().collect(),
        }
    };
    chosen.sort_unstable();
    chosen
}
