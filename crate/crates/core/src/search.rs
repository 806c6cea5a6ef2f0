//! Best-first top-k search over one annotated trie.
//!
//! Entries are popped in ascending order of their key, the largest lower
//! bound known for the subtree: the one-side bound of the path prefix, the
//! pivot bound of the node and, for leaves, the two-side bound. Child keys
//! never drop below their parent's key, so once a popped key exceeds the
//! current k-th distance nothing left in the queue can improve the result.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::distances::{HausdorffState, OrderedDpState, Step};
use crate::error::{Error, Result};
use crate::model::{Dataset, GridConfig, Measure, Point};
use crate::trie::{Label, NodeId, PivotRange, RpTrie};
use crate::zorder::cell_center;

/// One ranked answer.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Hit {
    pub id: u64,
    pub distance: f64,
}

impl Hit {
    /// Result order: distance, then id.
    pub fn rank_cmp(&self, other: &Hit) -> Ordering {
        self.distance
            .total_cmp(&other.distance)
            .then(self.id.cmp(&other.id))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SearchStats {
    /// Queue entries popped and expanded or evaluated.
    pub visited_nodes: usize,
    /// Subtrees discarded by a bound, either before insertion or at the end.
    pub pruned_nodes: usize,
    /// Exact distance evaluations.
    pub exact_distances: usize,
}

impl SearchStats {
    pub fn merge(&mut self, other: &SearchStats) {
        self.visited_nodes += other.visited_nodes;
        self.pruned_nodes += other.pruned_nodes;
        self.exact_distances += other.exact_distances;
    }
}

/// Query-side inputs shared by every shard search.
#[derive(Clone, Copy, Debug)]
pub struct QueryContext<'a> {
    pub query: &'a [Point],
    pub measure: Measure,
    pub grid: &'a GridConfig,
    /// Query-to-pivot distances; `None` disables pivot pruning.
    pub d_qp: Option<&'a [f64]>,
}

/// Two-sided triangle-inequality bound from the pivot ranges of a node.
pub fn pivot_lb(measure: Measure, d_qp: &[f64], hr: &[PivotRange], slack: f64) -> Result<f64> {
    if !measure.is_metric() {
        return Err(Error::config(format!("{measure} has no pivot bound")));
    }
    if d_qp.len() != hr.len() {
        return Err(Error::input(format!(
            "{} pivot distances for {} pivot ranges",
            d_qp.len(),
            hr.len()
        )));
    }
    Ok(pivot_bound(d_qp, hr, slack))
}

#[inline]
fn pivot_bound(d_qp: &[f64], hr: &[PivotRange], slack: f64) -> f64 {
    d_qp.iter()
        .zip(hr)
        .map(|(&d, r)| (d - r.max - slack).max(r.min - d - slack))
        .fold(0.0, f64::max)
}

/// Leaf two-side bound from the full reference distance and the leaf's
/// `d_max`.
#[inline]
pub fn two_side_bound(measure: Measure, full: f64, d_max: f64) -> f64 {
    match measure {
        Measure::Dtw => full,
        _ => (full - d_max).max(0.0),
    }
}

/// `bound > d_k`, allowing for rounding in the bound arithmetic so that a
/// trajectory tied with the current k-th distance is never lost.
#[inline]
fn exceeds(bound: f64, d_k: f64) -> bool {
    bound > d_k + 1e-12 * (1.0 + d_k.abs())
}

/// Incremental distance-matrix state for the path prefix of an entry.
#[derive(Clone, Debug)]
pub enum PathState {
    Hausdorff(HausdorffState),
    Frechet(OrderedDpState),
    Dtw(OrderedDpState),
}

impl PathState {
    pub fn new(measure: Measure, query_len: usize) -> Self {
        match measure {
            Measure::Hausdorff => PathState::Hausdorff(HausdorffState::new(query_len)),
            Measure::Frechet => PathState::Frechet(OrderedDpState::new(query_len)),
            Measure::Dtw => PathState::Dtw(OrderedDpState::new(query_len)),
        }
    }

    /// Appends the reference point behind `label`; `End` and `Root` leave
    /// the state unchanged.
    pub fn extend(&mut self, label: Label, ctx: &QueryContext<'_>) -> Step {
        let Some(z) = label.cell() else {
            return self.current(ctx.grid.slack);
        };
        match self {
            PathState::Hausdorff(s) => s.extend(ctx.query, &cell_center(z, ctx.grid), ctx.grid.slack),
            PathState::Frechet(s) => s.extend_frechet(ctx.query, &cell_center(z, ctx.grid), ctx.grid.slack),
            PathState::Dtw(s) => s.extend_dtw(ctx.query, z, ctx.grid),
        }
    }

    pub fn current(&self, slack: f64) -> Step {
        match self {
            PathState::Hausdorff(s) => Step {
                lb_o: s.lb_o(slack),
                full: s.full(),
            },
            PathState::Frechet(s) => Step {
                lb_o: if s.is_empty() { 0.0 } else { (s.c_min() - slack).max(0.0) },
                full: s.full(),
            },
            PathState::Dtw(s) => Step {
                lb_o: s.c_min(),
                full: s.full(),
            },
        }
    }
}

/// Bounded max-heap of the best `k` hits seen so far.
#[derive(Clone, Debug)]
pub struct ResultHeap {
    k: usize,
    heap: BinaryHeap<HeapHit>,
}

#[derive(Clone, Copy, Debug)]
struct HeapHit(Hit);

impl PartialEq for HeapHit {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapHit {}
impl PartialOrd for HeapHit {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapHit {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.rank_cmp(&other.0)
    }
}

impl ResultHeap {
    pub fn new(k: usize) -> Self {
        ResultHeap {
            k,
            heap: BinaryHeap::with_capacity(k + 1),
        }
    }

    /// Current k-th distance, `+inf` until `k` hits are held.
    pub fn d_k(&self) -> f64 {
        if self.heap.len() < self.k {
            f64::INFINITY
        } else {
            self.heap.peek().map_or(f64::INFINITY, |h| h.0.distance)
        }
    }

    pub fn offer(&mut self, hit: Hit) {
        if self.heap.len() < self.k {
            self.heap.push(HeapHit(hit));
        } else if let Some(worst) = self.heap.peek() {
            if hit.rank_cmp(&worst.0) == Ordering::Less {
                self.heap.pop();
                self.heap.push(HeapHit(hit));
            }
        }
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    /// Hits in ascending (distance, id) order.
    pub fn into_sorted(self) -> Vec<Hit> {
        self.heap.into_sorted_vec().into_iter().map(|h| h.0).collect()
    }
}

struct Entry {
    key: f64,
    seq: u64,
    node: NodeId,
    state: PathState,
    lb_o: f64,
    lb_t: f64,
    lb_p: f64,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Entry {}
impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Entry {
    // reversed: BinaryHeap pops the smallest key first
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .key
            .total_cmp(&self.key)
            .then(other.seq.cmp(&self.seq))
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SearchOptions {
    /// Record every pruning decision and leaf evaluation.
    pub audit: bool,
}

/// A subtree discarded by `bound`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrunedSubtree {
    pub node: NodeId,
    pub bound: f64,
    pub tids: Vec<u64>,
}

/// Bounds of an evaluated leaf together with its exact distances.
#[derive(Clone, Debug, PartialEq)]
pub struct LeafEvaluation {
    pub node: NodeId,
    pub lb_o: f64,
    pub lb_t: f64,
    pub lb_p: f64,
    pub distances: Vec<(u64, f64)>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SearchAudit {
    pub popped_keys: Vec<f64>,
    pub pruned: Vec<PrunedSubtree>,
    pub leaves: Vec<LeafEvaluation>,
    /// One-side bound of every child entry created, paired with its parent's.
    pub lb_o_edges: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    pub hits: Vec<Hit>,
    pub stats: SearchStats,
}

/// Exact top-k search of `trie`, whose member trajectories live in `data`.
pub fn top_k_search(
    trie: &RpTrie,
    data: &Dataset,
    ctx: &QueryContext<'_>,
    k: usize,
) -> Result<SearchOutcome> {
    top_k_search_with(trie, data, ctx, k, SearchOptions::default()).map(|(o, _)| o)
}

pub fn top_k_search_with(
    trie: &RpTrie,
    data: &Dataset,
    ctx: &QueryContext<'_>,
    k: usize,
    opts: SearchOptions,
) -> Result<(SearchOutcome, Option<SearchAudit>)> {
    if k < 1 {
        return Err(Error::input("k must be at least 1"));
    }
    if ctx.query.is_empty() {
        return Err(Error::input("query trajectory is empty"));
    }
    let d_qp = match ctx.d_qp {
        Some(d) if !ctx.measure.is_metric() => {
            if !d.is_empty() {
                return Err(Error::config(format!("{} has no pivot bound", ctx.measure)));
            }
            None
        }
        Some([]) => None,
        Some(d) => {
            if d.len() != trie.pivot_count() {
                return Err(Error::input(format!(
                    "{} pivot distances for a trie with {} pivots",
                    d.len(),
                    trie.pivot_count()
                )));
            }
            Some(d)
        }
        None => None,
    };
    let slack = ctx.grid.slack;
    let mut audit = opts.audit.then(SearchAudit::default);
    let mut stats = SearchStats::default();
    let mut results = ResultHeap::new(k);
    let mut queue = BinaryHeap::new();
    let mut seq = 0u64;

    let prune = |audit: &mut Option<SearchAudit>, node: NodeId, bound: f64| {
        if let Some(a) = audit.as_mut() {
            a.pruned.push(PrunedSubtree {
                node,
                bound,
                tids: trie.subtree_tids(node),
            });
        }
    };

    queue.push(Entry {
        key: 0.0,
        seq,
        node: RpTrie::ROOT,
        state: PathState::new(ctx.measure, ctx.query.len()),
        lb_o: 0.0,
        lb_t: 0.0,
        lb_p: 0.0,
    });

    while let Some(entry) = queue.pop() {
        if let Some(a) = audit.as_mut() {
            a.popped_keys.push(entry.key);
        }
        let d_k = results.d_k();
        if exceeds(entry.key, d_k) {
            stats.pruned_nodes += 1 + queue.len();
            prune(&mut audit, entry.node, entry.key);
            if audit.is_some() {
                for e in queue.drain() {
                    prune(&mut audit, e.node, e.key);
                }
            }
            break;
        }
        stats.visited_nodes += 1;
        let node = trie.node(entry.node);

        if node.is_leaf() {
            let mut evaluated = Vec::new();
            for &tid in &node.tids {
                let t = data
                    .get(tid)
                    .ok_or_else(|| Error::input(format!("trajectory {tid} missing from shard data")))?;
                let distance = ctx.measure.distance_unchecked(ctx.query, &t.points);
                stats.exact_distances += 1;
                results.offer(Hit { id: tid, distance });
                if audit.is_some() {
                    evaluated.push((tid, distance));
                }
            }
            if let Some(a) = audit.as_mut() {
                a.leaves.push(LeafEvaluation {
                    node: entry.node,
                    lb_o: entry.lb_o,
                    lb_t: entry.lb_t,
                    lb_p: entry.lb_p,
                    distances: evaluated,
                });
            }
            continue;
        }

        let n_children = node.children.len();
        let mut parent_state = Some(entry.state);
        for (i, &c) in node.children.iter().enumerate() {
            let child = trie.node(c);
            let mut state = if i + 1 == n_children {
                parent_state.take().expect("state moved once")
            } else {
                parent_state.as_ref().expect("state kept until last child").clone()
            };
            let step = state.extend(child.label, ctx);
            let lb_p = match d_qp {
                Some(d) => pivot_bound(d, &child.hr, slack),
                None => 0.0,
            };
            let lb_t = if child.is_leaf() {
                two_side_bound(ctx.measure, step.full, child.d_max)
            } else {
                0.0
            };
            let key = entry.key.max(step.lb_o).max(lb_p).max(lb_t);
            if let Some(a) = audit.as_mut() {
                a.lb_o_edges.push((entry.lb_o, step.lb_o));
            }
            if exceeds(key, results.d_k()) {
                stats.pruned_nodes += 1;
                prune(&mut audit, c, key);
                continue;
            }
            seq += 1;
            queue.push(Entry {
                key,
                seq,
                node: c,
                state,
                lb_o: step.lb_o,
                lb_t,
                lb_p,
            });
        }
    }

    Ok((
        SearchOutcome {
            hits: results.into_sorted(),
            stats,
        },
        audit,
    ))
}
