use crate::circuit::{Circuit, Operation};
use crate::ecm::CanonicalEr;
use crate::error::{Result, TusqError};
use crate::pauli::Pauli;

#[derive(Debug, Clone, PartialEq)]
pub struct Leaf {
    pub key: CanonicalEr,
    pub shots: u64,
}

/// A branch point or leaf of the compressed trie. Logical depth `d` means
/// the Paulis at sites `0..d` are fixed; a leaf sits at depth `n_sites`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub depth: usize,
    pub parent: Option<usize>,
    /// Ordered by the Pauli at `depth`, `I < X < Y < Z`.
    pub children: Vec<usize>,
    /// Leaves below this node occupy `leaf_range` in sorted leaf order.
    pub leaf_range: (usize, usize),
}

impl Node {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

/// Prefix trie over canonical realizations. The root holds the state after
/// the gates preceding the first noise site; descending into depth `d + 1`
/// applies the Pauli chosen at site `d` and the gates up to site `d + 1`.
/// Chains without branching are stored as a single physical edge.
#[derive(Debug, Clone)]
pub struct ExecutionTree {
    n_qubits: usize,
    n_sites: usize,
    gates: Vec<Operation>,
    /// Segment `k` is `gates[seg_offsets[k]..seg_offsets[k + 1]]`: segment 0
    /// precedes site 0, segment `k` follows site `k - 1`.
    seg_offsets: Vec<usize>,
    site_qubits: Vec<usize>,
    measured: Vec<usize>,
    nodes: Vec<Node>,
    leaves: Vec<Leaf>,
}

pub fn build_tree(circuit: &Circuit, kept: Vec<(CanonicalEr, u64)>) -> Result<ExecutionTree> {
    let n_sites = circuit.n_sites();
    if kept.is_empty() {
        return Err(TusqError::InvalidInput("execution set is empty".into()));
    }
    for (key, shots) in &kept {
        if key.as_er().len() != n_sites {
            return Err(TusqError::SiteCount {
                expected: n_sites,
                got: key.as_er().len(),
            });
        }
        if *shots == 0 {
            return Err(TusqError::InvalidInput("leaf with zero shots".into()));
        }
    }
    let mut leaves: Vec<Leaf> = kept
        .into_iter()
        .map(|(key, shots)| Leaf { key, shots })
        .collect();
    leaves.sort_by(|a, b| a.key.cmp(&b.key));
    if leaves.windows(2).any(|w| w[0].key == w[1].key) {
        return Err(TusqError::DuplicateKey);
    }

    let mut gates = Vec::new();
    let mut seg_offsets = vec![0];
    let mut site_qubits = Vec::with_capacity(n_sites);
    for op in circuit.ops() {
        if op.is_noise_site() {
            seg_offsets.push(gates.len());
            site_qubits.push(op.qubits[0]);
        } else if op.is_effective_gate() {
            gates.push(op.clone());
        }
    }
    seg_offsets.push(gates.len());

    let mut nodes = vec![Node {
        depth: 0,
        parent: None,
        children: Vec::new(),
        leaf_range: (0, leaves.len()),
    }];
    let mut stack = vec![0usize];
    while let Some(id) = stack.pop() {
        let Node {
            depth,
            leaf_range: (lo, hi),
            ..
        } = nodes[id];
        if depth == n_sites {
            debug_assert_eq!(hi - lo, 1);
            continue;
        }
        let mut start = lo;
        let mut children = Vec::new();
        while start < hi {
            let p = leaves[start].key.as_er().get(depth);
            let mut end = start + 1;
            while end < hi && leaves[end].key.as_er().get(depth) == p {
                end += 1;
            }
            let child_depth = if end - start == 1 {
                n_sites
            } else {
                leaves[start]
                    .key
                    .as_er()
                    .common_prefix(leaves[end - 1].key.as_er())
            };
            let child = nodes.len();
            nodes.push(Node {
                depth: child_depth,
                parent: Some(id),
                children: Vec::new(),
                leaf_range: (start, end),
            });
            children.push(child);
            start = end;
        }
        // Reverse so the stack pops children in order; ids stay ordered.
        stack.extend(children.iter().rev());
        nodes[id].children = children;
    }

    Ok(ExecutionTree {
        n_qubits: circuit.n_qubits(),
        n_sites,
        gates,
        seg_offsets,
        site_qubits,
        measured: circuit.measured_qubits(),
        nodes,
        leaves,
    })
}

impl ExecutionTree {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    /// Logical height `h`.
    pub fn height(&self) -> usize {
        self.n_sites
    }

    pub fn leaves(&self) -> &[Leaf] {
        &self.leaves
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn measured_qubits(&self) -> &[usize] {
        &self.measured
    }

    pub fn total_shots(&self) -> u64 {
        self.leaves.iter().map(|l| l.shots).sum()
    }

    pub fn segment(&self, k: usize) -> &[Operation] {
        &self.gates[self.seg_offsets[k]..self.seg_offsets[k + 1]]
    }

    pub fn trunk(&self) -> &[Operation] {
        self.segment(0)
    }

    pub fn site_qubit(&self, site: usize) -> usize {
        self.site_qubits[site]
    }

    /// Gates of the full circuit without noise.
    pub fn circuit_gate_count(&self) -> usize {
        self.gates.len()
    }

    /// Gate applications on the logical edges from depth `from` to `to`
    /// along `leaf`'s key.
    pub fn path_cost(&self, leaf: usize, from: usize, to: usize) -> u64 {
        if from >= to {
            return 0;
        }
        let key = self.leaves[leaf].key.as_er();
        let paulis = (from..to).filter(|&s| key.get(s) != Pauli::I).count();
        (paulis + self.seg_offsets[to + 1] - self.seg_offsets[from + 1]) as u64
    }

    /// Logical edge count `|E|`.
    pub fn edge_count(&self) -> u64 {
        self.nodes
            .iter()
            .filter_map(|n| n.parent.map(|p| (n.depth - self.nodes[p].depth) as u64))
            .sum()
    }

    /// Gate applications needed to visit every edge once, trunk included.
    pub fn edge_gate_count(&self) -> u64 {
        let edges: u64 = self
            .nodes
            .iter()
            .filter_map(|n| {
                n.parent
                    .map(|p| self.path_cost(n.leaf_range.0, self.nodes[p].depth, n.depth))
            })
            .sum();
        self.trunk().len() as u64 + edges
    }

    /// Gate applications if every leaf were simulated from scratch.
    pub fn naive_gate_count(&self) -> u64 {
        let full = self.gates.len() as u64;
        self.leaves
            .iter()
            .map(|l| full + l.key.as_er().hamming_weight() as u64)
            .sum()
    }

    /// Nodes holding at least `workers` subtrees, found by expanding whole
    /// levels of the physical tree. Leaf ranges of the result are contiguous
    /// and cover all leaves in order.
    pub fn frontier(&self, workers: usize) -> Vec<usize> {
        let mut frontier = vec![self.root()];
        while frontier.len() < workers {
            let next: Vec<usize> = frontier
                .iter()
                .flat_map(|&id| {
                    let node = &self.nodes[id];
                    if node.is_leaf() {
                        vec![id]
                    } else {
                        node.children.clone()
                    }
                })
                .collect();
            if next.len() == frontier.len() {
                break;
            }
            frontier = next;
        }
        frontier
    }
}
