//! Top-2 Hausdorff search over the five-trajectory running example on an
//! 8x8 unit grid, showing how much of the trie the bounds let us skip.

use trajsearch::fixtures::{running_grid, table2};
use trajsearch::search::{top_k_search_with, SearchOptions};
use trajsearch::trie::{annotate, build_trie, PivotSet};
use trajsearch::zorder::to_reference;
use trajsearch::{linear_scan, Measure, QueryContext};

fn main() -> anyhow::Result<()> {
    let grid = running_grid();
    let (data, query) = table2();

    let refs = data
        .iter()
        .map(|t| to_reference(t, &grid, Measure::Hausdorff))
        .collect::<Result<Vec<_>, _>>()?;
    let trie = annotate(build_trie(&refs)?, &PivotSet::empty(), Measure::Hausdorff, &grid, &data)?;
    println!("trie: {} nodes, {} leaves", trie.node_count(), trie.leaf_count());

    let ctx = QueryContext { query: &query.points, measure: Measure::Hausdorff, grid: &grid, d_qp: None };
    let (out, audit) = top_k_search_with(&trie, &data, &ctx, 2, SearchOptions { audit: true })?;
    for h in &out.hits {
        println!("t{}  {:.2}", h.id, h.distance);
    }
    println!("{:?}", out.stats);
    for p in audit.into_iter().flat_map(|a| a.pruned) {
        println!("pruned node {} (bound {:.2}) holding {:?}", p.node, p.bound, p.tids);
    }

    println!("linear scan:");
    for h in linear_scan(&data, &query.points, data.len(), Measure::Hausdorff)?.hits {
        println!("t{}  {:.2}", h.id, h.distance);
    }
    Ok(())
}
