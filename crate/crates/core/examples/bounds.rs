//! Walks one root-to-leaf path and prints the lower bounds as they tighten,
//! next to the exact distance, for each measure.

use trajsearch::fixtures::{running_grid, table2};
use trajsearch::search::{pivot_lb, two_side_bound, PathState};
use trajsearch::trie::{annotate, build_trie, select_pivots, PivotSet};
use trajsearch::zorder::to_reference;
use trajsearch::{Measure, QueryContext, RpTrie};

fn main() -> anyhow::Result<()> {
    let grid = running_grid();
    let (data, query) = table2();
    let target = 4;

    for m in Measure::ALL {
        let pivots = if m.is_metric() { select_pivots(data.as_slice(), 2, 4, m, 1)? } else { PivotSet::empty() };
        let refs = data.iter().map(|t| to_reference(t, &grid, m)).collect::<Result<Vec<_>, _>>()?;
        let trie = annotate(build_trie(&refs)?, &pivots, m, &grid, &data)?;
        let d_qp = pivots.distances_to(&query.points, m)?;
        let exact = m.distance(&query.points, &data.get(target).unwrap().points)?;
        println!("{m}: exact distance to t{target} = {exact:.3}");

        let ctx = QueryContext { query: &query.points, measure: m, grid: &grid, d_qp: None };
        let mut state = PathState::new(m, query.points.len());
        let mut node = RpTrie::ROOT;
        loop {
            let n = trie.node(node);
            if n.is_leaf() {
                let full = state.current(grid.slack).full;
                println!("  leaf: LB_t = {:.3} (d_max {:.3})", two_side_bound(m, full, n.d_max), n.d_max);
                break;
            }
            // follow the child whose subtree holds the target
            node = *n.children.iter().find(|&&c| trie.subtree_tids(c).contains(&target)).unwrap();
            let child = trie.node(node);
            let step = state.extend(child.label, &ctx);
            let lb_p = if m.is_metric() { pivot_lb(m, &d_qp, &child.hr, grid.slack)? } else { 0.0 };
            println!("  {:?}: LB_o = {:.3}  LB_p = {:.3}", child.label, step.lb_o, lb_p);
        }
    }
    Ok(())
}
