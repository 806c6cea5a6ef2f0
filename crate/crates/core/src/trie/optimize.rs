//! Greedy hitting-set construction of a Hausdorff trie.
//!
//! Hausdorff ignores point order, so each reference is a set of cells and
//! any arrangement of it is a valid path. At every node the most frequent
//! cell among the remaining sets becomes the next child, all sets containing
//! it move below that child (with the cell removed), and their cell counts
//! are subtracted from the node's frequency array before the next pick.
//! Ties go to the smaller z-value.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::{Label, NodeId, RpTrie, TrieNode};
use crate::error::{Error, Result};
use crate::zorder::{RefForm, ZValue};

/// Diagnostics collected while building an optimized trie.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GreedyReport {
    /// Frequency of every cell over the whole collection, ascending by cell.
    pub root_frequencies: Vec<(ZValue, usize)>,
    /// First-level picks in order: label, frequency at pick time, covered ids.
    pub root_picks: Vec<(ZValue, usize, Vec<u64>)>,
    /// Frequency increments and decrements over the whole build.
    pub count_ops: usize,
    /// Candidate inspections while selecting the most frequent cell.
    pub pick_ops: usize,
}

/// A trajectory id with its remaining cells as dense indices.
type Member = (u64, Vec<u32>);

pub fn build_optimized_trie(zsets: &[(u64, Vec<ZValue>)]) -> Result<RpTrie> {
    build_optimized_trie_traced(zsets).map(|(t, _)| t)
}

pub fn build_optimized_trie_traced(zsets: &[(u64, Vec<ZValue>)]) -> Result<(RpTrie, GreedyReport)> {
    if zsets.is_empty() {
        return Err(Error::input("cannot build a trie from zero trajectories"));
    }
    // dense cell indices, ascending by z-value so index order = tie order
    let mut cells: Vec<ZValue> = zsets.iter().flat_map(|(_, s)| s.iter().copied()).collect();
    cells.sort_unstable();
    cells.dedup();
    let index_of = |z: &ZValue| cells.binary_search(z).expect("cell collected above") as u32;

    let mut members: Vec<Member> = Vec::with_capacity(zsets.len());
    for (tid, set) in zsets {
        if set.is_empty() {
            return Err(Error::input(format!("trajectory {tid} has an empty cell set")));
        }
        let mut idx: Vec<u32> = set.iter().map(index_of).collect();
        idx.sort_unstable();
        if idx.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::input(format!(
                "cell set of trajectory {tid} contains duplicates"
            )));
        }
        members.push((*tid, idx));
    }

    let mut report = GreedyReport::default();
    let mut counts = vec![0u32; cells.len()];
    let mut postings: Vec<Vec<u32>> = vec![Vec::new(); cells.len()];
    let mut nodes = vec![TrieNode::new(Label::Root)];
    let mut stack: Vec<(NodeId, Vec<Member>)> = vec![(0, members)];

    while let Some((node_id, group)) = stack.pop() {
        let (ended, rest): (Vec<_>, Vec<_>) = group.into_iter().partition(|(_, s)| s.is_empty());
        let ended: Vec<u64> = ended.into_iter().map(|(t, _)| t).collect();
        if rest.is_empty() {
            nodes[node_id as usize].tids = ended;
            continue;
        }
        if !ended.is_empty() {
            let id = nodes.len() as NodeId;
            let mut end = TrieNode::new(Label::End);
            end.tids = ended;
            nodes.push(end);
            nodes[node_id as usize].children.push(id);
        }

        // frequency array and per-cell postings for this node's sets
        let mut touched: Vec<u32> = Vec::new();
        for (m, (_, set)) in rest.iter().enumerate() {
            for &c in set {
                if counts[c as usize] == 0 {
                    touched.push(c);
                }
                counts[c as usize] += 1;
                postings[c as usize].push(m as u32);
                report.count_ops += 1;
            }
        }
        if node_id == 0 {
            let mut freq: Vec<(ZValue, usize)> = touched
                .iter()
                .map(|&c| (cells[c as usize], counts[c as usize] as usize))
                .collect();
            freq.sort_unstable();
            report.root_frequencies = freq;
        }

        let mut heap: BinaryHeap<(u32, Reverse<u32>)> =
            touched.iter().map(|&c| (counts[c as usize], Reverse(c))).collect();
        let mut assigned = vec![false; rest.len()];
        let mut rest: Vec<Option<Member>> = rest.into_iter().map(Some).collect();
        let mut remaining = rest.len();

        while remaining > 0 {
            let (freq, c) = loop {
                let (f, Reverse(c)) = heap.pop().expect("a remaining set always has a cell");
                report.pick_ops += 1;
                if f == counts[c as usize] && f > 0 {
                    break (f, c);
                }
            };
            let label = cells[c as usize];
            let mut covered: Vec<Member> = Vec::with_capacity(freq as usize);
            for &m in &postings[c as usize] {
                let m = m as usize;
                if assigned[m] {
                    continue;
                }
                assigned[m] = true;
                remaining -= 1;
                let (tid, mut set) = rest[m].take().expect("unassigned member present");
                // C(remaining) -= C(covered)
                for &other in &set {
                    counts[other as usize] -= 1;
                    report.count_ops += 1;
                    if other != c && counts[other as usize] > 0 {
                        heap.push((counts[other as usize], Reverse(other)));
                    }
                }
                set.retain(|&x| x != c);
                covered.push((tid, set));
            }
            debug_assert_eq!(covered.len(), freq as usize);

            let child = nodes.len() as NodeId;
            nodes.push(TrieNode::new(Label::Cell(label)));
            nodes[node_id as usize].children.push(child);
            if node_id == 0 {
                let mut tids: Vec<u64> = covered.iter().map(|(t, _)| *t).collect();
                tids.sort_unstable();
                report.root_picks.push((label, freq as usize, tids));
            }
            stack.push((child, covered));
        }

        for &c in &touched {
            debug_assert_eq!(counts[c as usize], 0);
            postings[c as usize].clear();
        }
    }

    Ok((RpTrie::from_nodes(RefForm::Set, nodes), report))
}
