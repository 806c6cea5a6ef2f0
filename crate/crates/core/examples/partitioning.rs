//! Clusters a synthetic workload by grid coarsening and compares how the
//! three strategies spread clusters over shards.

use trajsearch::engine::{generate, SynthParams};
use trajsearch::partition::{
    cluster_by_coarsening, cluster_target, partition_heterogeneous, partition_homogeneous, partition_random,
};
use trajsearch::build_grid;

fn main() -> anyhow::Result<()> {
    let data = generate(&SynthParams { clusters: 12, per_cluster: 40, seed: 3, ..SynthParams::default() })?;
    let grid = build_grid(&data.bbox().unwrap(), 5.0)?;
    let n_g = 8;
    let clusters = cluster_by_coarsening(&data, &grid, cluster_target(data.len(), n_g))?;
    println!(
        "{} trajectories -> {} clusters at {} bits per axis (grid has {})",
        data.len(),
        clusters.cluster_count(),
        clusters.granularity,
        grid.bits
    );

    let strategies = [
        ("hetero", partition_heterogeneous(&data, &clusters, n_g)?),
        ("homo", partition_homogeneous(&data, &clusters, n_g)?),
        ("random", partition_random(&data, n_g, 3)?),
    ];
    for (name, a) in strategies {
        // shards touched by each cluster, averaged
        let spread: f64 = clusters
            .clusters()
            .iter()
            .map(|ids| {
                let mut shards: Vec<usize> = ids.iter().map(|id| a.partition_of[id]).collect();
                shards.sort_unstable();
                shards.dedup();
                shards.len() as f64
            })
            .sum::<f64>()
            / clusters.cluster_count() as f64;
        println!("{name:>6}: sizes {:?}, mean shards per cluster {spread:.2}", a.sizes);
    }
    Ok(())
}
