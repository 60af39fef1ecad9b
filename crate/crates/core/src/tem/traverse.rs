use std::collections::BTreeMap;

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tree::{ExecutionTree, Leaf};
use crate::circuit::StateVector;
use crate::error::{Result, TusqError};
use crate::pauli::Pauli;
use crate::rng;

/// Largest norm drift tolerated after a rollback before the state is
/// recomputed from the initial state.
pub const ROLLBACK_TOLERANCE: f64 = 1e-8;

/// How the traversal returns to a branch node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BacktrackPolicy {
    /// Always apply inverse gates back to the branch node.
    Uncompute,
    /// Uncompute, unless replaying the branch node's prefix from the initial
    /// state takes fewer gate applications.
    #[default]
    Cheapest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TraversalStats {
    pub forward_gate_applications: u64,
    pub inverse_gate_applications: u64,
    /// Logical edges `|E|`.
    pub edges: u64,
    /// Gates along all edges plus the shared trunk.
    pub edge_gates: u64,
    pub leaves: u64,
    pub height: u64,
    pub naive_gate_applications: u64,
    /// Times a node state was rebuilt from the initial state.
    pub replays: u64,
    pub edge_descents: u64,
    pub edge_ascents: u64,
}

impl TraversalStats {
    fn for_tree(tree: &ExecutionTree) -> Self {
        TraversalStats {
            edges: tree.edge_count(),
            edge_gates: tree.edge_gate_count(),
            leaves: tree.leaves().len() as u64,
            height: tree.height() as u64,
            naive_gate_applications: tree.naive_gate_count(),
            ..Default::default()
        }
    }

    pub fn total_applications(&self) -> u64 {
        self.forward_gate_applications + self.inverse_gate_applications
    }

    fn absorb(&mut self, other: &TraversalStats) {
        self.forward_gate_applications += other.forward_gate_applications;
        self.inverse_gate_applications += other.inverse_gate_applications;
        self.replays += other.replays;
        self.edge_descents += other.edge_descents;
        self.edge_ascents += other.edge_ascents;
    }
}

/// Walks one contiguous block of leaves with a single statevector.
struct Walker<'a> {
    tree: &'a ExecutionTree,
    init: &'a StateVector,
    state: StateVector,
    policy: BacktrackPolicy,
    stats: TraversalStats,
}

impl<'a> Walker<'a> {
    fn new(tree: &'a ExecutionTree, init: &'a StateVector, policy: BacktrackPolicy) -> Self {
        Walker {
            tree,
            init,
            state: init.clone(),
            policy,
            stats: TraversalStats::default(),
        }
    }

    fn descend(&mut self, leaf: usize, from: usize, to: usize) -> Result<()> {
        let key = self.tree.leaves()[leaf].key.as_er();
        for site in from..to {
            let p = key.get(site);
            if p != Pauli::I {
                self.state.apply_pauli(self.tree.site_qubit(site), p);
                self.stats.forward_gate_applications += 1;
            }
            for op in self.tree.segment(site + 1) {
                self.state.apply_gate(op)?;
            }
            self.stats.forward_gate_applications += self.tree.segment(site + 1).len() as u64;
        }
        self.stats.edge_descents += to.saturating_sub(from) as u64;
        Ok(())
    }

    fn ascend(&mut self, leaf: usize, from: usize, to: usize) -> Result<()> {
        let key = self.tree.leaves()[leaf].key.as_er();
        for site in (to..from).rev() {
            let seg = self.tree.segment(site + 1);
            for op in seg.iter().rev() {
                self.state.apply_inverse(op)?;
            }
            self.stats.inverse_gate_applications += seg.len() as u64;
            let p = key.get(site);
            if p != Pauli::I {
                self.state.apply_pauli(self.tree.site_qubit(site), p);
                self.stats.inverse_gate_applications += 1;
            }
        }
        self.stats.edge_ascents += from.saturating_sub(to) as u64;
        Ok(())
    }

    /// Rebuilds the state at depth `depth` along `leaf` from the initial state.
    fn replay(&mut self, leaf: usize, depth: usize) -> Result<()> {
        self.state.copy_from(self.init);
        for op in self.tree.trunk() {
            self.state.apply_gate(op)?;
        }
        self.stats.forward_gate_applications += self.tree.trunk().len() as u64;
        self.stats.replays += 1;
        self.descend(leaf, 0, depth)
    }

    /// Visits leaves `lo..hi`, which must all lie below a node at depth
    /// `start_depth` whose state is already in `self.state`.
    fn walk<F>(&mut self, lo: usize, hi: usize, start_depth: usize, visit: &mut F) -> Result<()>
    where
        F: FnMut(usize, &Leaf, &StateVector) -> Result<()>,
    {
        let height = self.tree.height();
        for i in lo..hi {
            if i == lo {
                self.descend(i, start_depth, height)?;
            } else {
                let prev = self.tree.leaves()[i - 1].key.as_er();
                let cur = self.tree.leaves()[i].key.as_er();
                let branch = prev.common_prefix(cur).max(start_depth);
                let rollback = self.tree.path_cost(i - 1, branch, height);
                let replay = self.tree.trunk().len() as u64 + self.tree.path_cost(i, 0, branch);
                if self.policy == BacktrackPolicy::Cheapest && replay < rollback {
                    self.replay(i, branch)?;
                } else {
                    self.ascend(i - 1, height, branch)?;
                    let drift = (self.state.norm() - 1.0).abs();
                    if drift > ROLLBACK_TOLERANCE {
                        warn!("rollback drifted by {drift:.2e}; recomputing from the initial state");
                        self.replay(i, branch)?;
                    }
                }
                self.descend(i, branch, height)?;
            }
            visit(i, &self.tree.leaves()[i], &self.state)?;
        }
        Ok(())
    }
}

fn check_init(tree: &ExecutionTree, init: &StateVector) -> Result<()> {
    if init.n_qubits() != tree.n_qubits() {
        return Err(TusqError::InvalidInput(format!(
            "initial state has {} qubits, tree has {}",
            init.n_qubits(),
            tree.n_qubits()
        )));
    }
    let drift = (init.norm() - 1.0).abs();
    if drift > 1e-9 {
        return Err(TusqError::Unnormalized(drift));
    }
    Ok(())
}

/// Depth-first traversal calling `visit` with each leaf's final state, in
/// leaf order.
pub fn traverse<F>(
    tree: &ExecutionTree,
    init: &StateVector,
    policy: BacktrackPolicy,
    mut visit: F,
) -> Result<TraversalStats>
where
    F: FnMut(usize, &Leaf, &StateVector) -> Result<()>,
{
    check_init(tree, init)?;
    let mut walker = Walker::new(tree, init, policy);
    for op in tree.trunk() {
        walker.state.apply_gate(op)?;
    }
    walker.stats.forward_gate_applications += tree.trunk().len() as u64;
    walker.walk(0, tree.leaves().len(), 0, &mut visit)?;
    let mut stats = TraversalStats::for_tree(tree);
    stats.absorb(&walker.stats);
    Ok(stats)
}

fn sample_leaf(
    seed: u64,
    leaf: &Leaf,
    state: &StateVector,
    counts: &mut BTreeMap<usize, u64>,
) -> Result<()> {
    let mut stream = rng::leaf_stream(seed, leaf.key.as_er().words());
    state.sample_into(leaf.shots, &mut stream, counts)
}

/// Runs the tree and samples every leaf `shots` times from its own
/// seed-derived stream. Counts are keyed by full basis index.
pub fn dftt_execute(
    tree: &ExecutionTree,
    init: &StateVector,
    seed: u64,
    policy: BacktrackPolicy,
) -> Result<(BTreeMap<usize, u64>, TraversalStats)> {
    let mut counts = BTreeMap::new();
    let stats = traverse(tree, init, policy, |_, leaf, state| {
        sample_leaf(seed, leaf, state, &mut counts)
    })?;
    Ok((counts, stats))
}

/// Bytes of statevector storage one worker needs: the state plus the
/// sampling buffer.
pub fn worker_memory(n_qubits: usize) -> u64 {
    24u64 << n_qubits
}

/// `dftt_execute` split over `workers` threads. Each frontier subtree is
/// reached by replaying its prefix from `init`, then traversed depth-first.
/// Counts do not depend on `workers`.
pub fn parallel_subtrees(
    tree: &ExecutionTree,
    init: &StateVector,
    workers: usize,
    seed: u64,
    policy: BacktrackPolicy,
    memory_budget: u64,
) -> Result<(BTreeMap<usize, u64>, TraversalStats)> {
    if workers == 0 {
        return Err(TusqError::Config("workers must be at least 1".into()));
    }
    let required = worker_memory(tree.n_qubits()).saturating_mul(workers as u64);
    if required > memory_budget {
        return Err(TusqError::MemoryBudget {
            workers,
            required,
            budget: memory_budget,
        });
    }
    if workers == 1 {
        return dftt_execute(tree, init, seed, policy);
    }
    check_init(tree, init)?;
    let frontier = tree.frontier(workers);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| TusqError::Config(format!("thread pool: {e}")))?;
    let parts: Vec<(BTreeMap<usize, u64>, TraversalStats)> = pool.install(|| {
        frontier
            .par_iter()
            .map(|&id| {
                let node = &tree.nodes()[id];
                let (lo, hi) = node.leaf_range;
                let mut walker = Walker::new(tree, init, policy);
                walker.replay(lo, node.depth)?;
                walker.stats.replays -= 1;
                let mut counts = BTreeMap::new();
                walker.walk(lo, hi, node.depth, &mut |_, leaf, state| {
                    sample_leaf(seed, leaf, state, &mut counts)
                })?;
                Ok((counts, walker.stats))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let mut counts = BTreeMap::new();
    let mut stats = TraversalStats::for_tree(tree);
    for (part, s) in parts {
        for (k, c) in part {
            *counts.entry(k).or_insert(0) += c;
        }
        stats.absorb(&s);
    }
    Ok((counts, stats))
}
