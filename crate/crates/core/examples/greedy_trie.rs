//! Greedy hitting-set trie construction for Hausdorff, compared with the
//! plain trie over sorted cell sets.

use trajsearch::fixtures::greedy_collection;
use trajsearch::trie::{build_optimized_trie_traced, build_trie};
use trajsearch::zorder::{RefForm, ReferenceTrajectory};

fn main() -> anyhow::Result<()> {
    let sets = greedy_collection();
    for (id, s) in &sets {
        let cells: Vec<String> = s.iter().map(|z| z.to_binary(2)).collect();
        println!("Z{id}: {{{}}}", cells.join(", "));
    }
    let (opt, report) = build_optimized_trie_traced(&sets)?;
    let freq: Vec<String> = report.root_frequencies.iter().map(|(z, f)| format!("{}:{f}", z.to_binary(2))).collect();
    println!("root frequencies: {}", freq.join(" "));
    for (z, f, ids) in &report.root_picks {
        println!("pick {} (frequency {f}) covers {ids:?}", z.to_binary(2));
    }

    let refs: Vec<ReferenceTrajectory> = sets
        .iter()
        .map(|(id, s)| ReferenceTrajectory { source_id: *id, form: RefForm::Set, zvals: s.clone(), ref_points: vec![] })
        .collect();
    let plain = build_trie(&refs)?;
    println!("nodes: greedy {} vs sorted-set {}", opt.node_count(), plain.node_count());
    Ok(())
}
