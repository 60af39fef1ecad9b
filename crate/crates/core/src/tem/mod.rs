//! Pruning of the canonical tally and shared-prefix tree execution.

mod pruning;
mod traverse;
mod tree;

pub use pruning::{partition_significant, PruningConfig, PruningPartition, Selection};
pub use traverse::{
    dftt_execute, parallel_subtrees, traverse, worker_memory, BacktrackPolicy, TraversalStats,
    ROLLBACK_TOLERANCE,
};
pub use tree::{build_tree, ExecutionTree, Leaf, Node};
