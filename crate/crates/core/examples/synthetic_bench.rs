//! Builds indexes over 5000 clustered trajectories for each measure and
//! times them against the linear scan.
//!
//! `cargo run --release --example synthetic_bench`

use trajsearch::engine::{bench, generate, perturbed_queries, SynthParams};
use trajsearch::{build_index, BuildParams, Measure};

fn main() -> anyhow::Result<()> {
    let data = generate(&SynthParams { clusters: 50, per_cluster: 100, seed: 7, ..SynthParams::default() })?;
    let queries = perturbed_queries(&data, 10, 1.0, 8)?;
    for m in Measure::ALL {
        let params = BuildParams { partitions: 8, seed: 7, ..BuildParams::new(m, 5.0) };
        let start = std::time::Instant::now();
        let index = build_index(&data, &params)?;
        let build = start.elapsed();
        let r = bench(&index, &queries, 10, 3)?;
        let exact: f64 = r.rows.iter().map(|row| row.stats.exact_distances as f64).sum::<f64>() / r.rows.len() as f64;
        println!(
            "{m:>9}: build {build:.2?}, query {:.3} ms vs scan {:.3} ms (x{:.1}), {exact:.0} exact distances of {}, all exact: {}",
            r.mean_ms,
            r.scan_mean_ms,
            r.mean_speedup,
            data.len(),
            r.rows.iter().all(|row| row.exact)
        );
    }
    Ok(())
}
