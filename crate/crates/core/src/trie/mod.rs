//! Reference-point trie: one root-to-leaf path per distinct reference
//! trajectory, leaves holding the ids of the trajectories that share it.
//!
//! Nodes live in an arena kept in canonical order: breadth-first from the
//! root, siblings sorted by label, so two tries with the same shape compare
//! equal with `==` and the succinct decoder can reproduce the arena exactly.
//! Every node carries one `(min, max)` distance range per global pivot, and
//! every leaf the largest distance between its reference and its members.

mod annotate;
mod build;
mod optimize;
mod pivots;
mod succinct;

pub use annotate::annotate;
pub use build::build_trie;
pub use optimize::{build_optimized_trie, build_optimized_trie_traced, GreedyReport};
pub use pivots::{select_pivots, PivotSet};
pub use succinct::{
    decode_payload, decode_succinct, encode_payload, encode_succinct, BitVec, SuccinctLevels,
    TriePayload, DEFAULT_DENSE_LEVELS, PAYLOAD_MAGIC, PAYLOAD_VERSION,
};

pub(crate) use pivots::pairwise_score;
pub(crate) use succinct::decode_payload_at;

use std::collections::VecDeque;

use crate::zorder::{RefForm, ZValue};

pub type NodeId = u32;

/// Node label. `End` marks a reference that is a proper prefix of another so
/// that every reference still terminates at a leaf.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Root,
    Cell(ZValue),
    End,
}

impl Label {
    pub fn cell(self) -> Option<ZValue> {
        match self {
            Label::Cell(z) => Some(z),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PivotRange {
    pub min: f64,
    pub max: f64,
}

impl PivotRange {
    pub const EMPTY: PivotRange = PivotRange {
        min: f64::INFINITY,
        max: f64::NEG_INFINITY,
    };

    pub fn point(d: f64) -> Self {
        PivotRange { min: d, max: d }
    }

    pub fn merge(&mut self, other: &PivotRange) {
        self.min = self.min.min(other.min);
        self.max = self.max.max(other.max);
    }

    pub fn contains(&self, d: f64) -> bool {
        self.min <= d && d <= self.max
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrieNode {
    pub label: Label,
    pub children: Vec<NodeId>,
    /// Member trajectory ids; non-empty exactly on leaves.
    pub tids: Vec<u64>,
    /// Leaf only: max distance between a member and the leaf's reference.
    pub d_max: f64,
    pub hr: Vec<PivotRange>,
}

impl TrieNode {
    fn new(label: Label) -> Self {
        TrieNode {
            label,
            children: Vec::new(),
            tids: Vec::new(),
            d_max: 0.0,
            hr: Vec::new(),
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RpTrie {
    form: RefForm,
    nodes: Vec<TrieNode>,
}

impl RpTrie {
    pub const ROOT: NodeId = 0;

    /// Takes nodes in any order with `nodes[0]` as the root and rewrites them
    /// into canonical breadth-first order.
    pub(crate) fn from_nodes(form: RefForm, nodes: Vec<TrieNode>) -> Self {
        let mut trie = RpTrie { form, nodes };
        trie.canonicalize();
        trie
    }

    /// A root-only trie for a shard that received no trajectories; its
    /// empty pivot ranges make every pivot bound infinite.
    pub(crate) fn empty(form: RefForm, n_pivots: usize) -> Self {
        let mut root = TrieNode::new(Label::Root);
        root.hr = vec![PivotRange::EMPTY; n_pivots];
        RpTrie::from_nodes(form, vec![root])
    }

    pub fn form(&self) -> RefForm {
        self.form
    }

    pub fn root(&self) -> &TrieNode {
        &self.nodes[0]
    }

    pub fn node(&self, id: NodeId) -> &TrieNode {
        &self.nodes[id as usize]
    }

    pub(crate) fn node_mut(&mut self, id: NodeId) -> &mut TrieNode {
        &mut self.nodes[id as usize]
    }

    pub fn nodes(&self) -> &[TrieNode] {
        &self.nodes
    }

    /// Total node count including the root.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_leaf()).count()
    }

    /// Number of indexed trajectories.
    pub fn trajectory_count(&self) -> usize {
        self.nodes.iter().map(|n| n.tids.len()).sum()
    }

    pub fn pivot_count(&self) -> usize {
        self.root().hr.len()
    }

    /// Node depth per arena index (root = 0).
    pub fn depths(&self) -> Vec<u32> {
        let mut depth = vec![0u32; self.nodes.len()];
        for (i, n) in self.nodes.iter().enumerate() {
            for &c in &n.children {
                depth[c as usize] = depth[i] + 1;
            }
        }
        depth
    }

    /// Every leaf with the cell labels on its root path, in path order.
    pub fn leaf_paths(&self) -> Vec<(NodeId, Vec<ZValue>)> {
        let mut out = Vec::new();
        let mut stack: Vec<(NodeId, Vec<ZValue>)> = vec![(Self::ROOT, Vec::new())];
        while let Some((id, path)) = stack.pop() {
            let node = self.node(id);
            if node.is_leaf() {
                out.push((id, path));
                continue;
            }
            for &c in node.children.iter().rev() {
                let mut p = path.clone();
                if let Some(z) = self.node(c).label.cell() {
                    p.push(z);
                }
                stack.push((c, p));
            }
        }
        out
    }

    /// All trajectory ids stored under `id`.
    pub fn subtree_tids(&self, id: NodeId) -> Vec<u64> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(n) = stack.pop() {
            let node = self.node(n);
            out.extend_from_slice(&node.tids);
            stack.extend(node.children.iter().copied());
        }
        out
    }

    /// Nodes in the subtree rooted at `id`, inclusive.
    pub fn subtree_size(&self, id: NodeId) -> usize {
        let mut count = 0;
        let mut stack = vec![id];
        while let Some(n) = stack.pop() {
            count += 1;
            stack.extend(self.node(n).children.iter().copied());
        }
        count
    }

    fn canonicalize(&mut self) {
        let old = std::mem::take(&mut self.nodes);
        let mut order: Vec<usize> = Vec::with_capacity(old.len());
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            order.push(i);
            let mut kids: Vec<usize> = old[i].children.iter().map(|&c| c as usize).collect();
            kids.sort_by_key(|&c| old[c].label);
            queue.extend(kids);
        }
        let mut new_id = vec![u32::MAX; old.len()];
        for (n, &o) in order.iter().enumerate() {
            new_id[o] = n as NodeId;
        }
        let mut slots: Vec<Option<TrieNode>> = old.into_iter().map(Some).collect();
        let mut nodes = Vec::with_capacity(order.len());
        for &o in &order {
            let mut node = slots[o].take().expect("each node visited once");
            node.children = node.children.iter().map(|&c| new_id[c as usize]).collect();
            node.children.sort_unstable();
            node.tids.sort_unstable();
            nodes.push(node);
        }
        self.nodes = nodes;
    }
}
