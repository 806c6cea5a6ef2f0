use std::collections::HashMap;

use super::{Label, NodeId, RpTrie, TrieNode};
use crate::error::{Error, Result};
use crate::zorder::ReferenceTrajectory;

/// Inserts every reference trajectory along its cell sequence. References
/// that end at a node which also has children get an `End` child leaf.
pub fn build_trie(refs: &[ReferenceTrajectory]) -> Result<RpTrie> {
    let first = refs
        .first()
        .ok_or_else(|| Error::input("cannot build a trie from zero trajectories"))?;
    let form = first.form;
    if let Some(r) = refs.iter().find(|r| r.form != form) {
        return Err(Error::input(format!(
            "trajectory {} uses {:?} form, expected {:?}",
            r.source_id, r.form, form
        )));
    }
    if let Some(r) = refs.iter().find(|r| r.is_empty()) {
        return Err(Error::input(format!(
            "reference of trajectory {} is empty",
            r.source_id
        )));
    }

    let mut nodes = vec![TrieNode::new(Label::Root)];
    let mut edges: HashMap<(NodeId, u64), NodeId> = HashMap::new();
    for r in refs {
        let mut cur: NodeId = 0;
        for z in &r.zvals {
            cur = *edges.entry((cur, z.0)).or_insert_with(|| {
                let id = nodes.len() as NodeId;
                nodes.push(TrieNode::new(Label::Cell(*z)));
                nodes[cur as usize].children.push(id);
                id
            });
        }
        nodes[cur as usize].tids.push(r.source_id);
    }

    for i in 0..nodes.len() {
        if !nodes[i].tids.is_empty() && !nodes[i].children.is_empty() {
            let id = nodes.len() as NodeId;
            let mut end = TrieNode::new(Label::End);
            end.tids = std::mem::take(&mut nodes[i].tids);
            nodes.push(end);
            nodes[i].children.push(id);
        }
    }
    Ok(RpTrie::from_nodes(form, nodes))
}
