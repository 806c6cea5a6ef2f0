//! Text ingest, index build, save and reload, with per-shard payload sizes.

use trajsearch::engine::{generate, ingest, write_index, write_trajectories, IngestOptions, SynthParams};
use trajsearch::{build_index, load_index, save_index, BuildParams, Measure};

fn main() -> anyhow::Result<()> {
    let dir = std::env::temp_dir().join(format!("trajsearch-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let text = dir.join("data.txt");
    let synthetic = generate(&SynthParams { clusters: 10, per_cluster: 30, len_min: 5, len_max: 40, ..SynthParams::default() })?;
    write_trajectories(std::fs::File::create(&text)?, &synthetic)?;

    let (data, report) = ingest(&text, &IngestOptions::default())?;
    println!("ingest: {report:?}");

    let params = BuildParams { partitions: 4, seed: 1, ..BuildParams::new(Measure::Frechet, 8.0) };
    let index = build_index(&data, &params)?;
    let path = dir.join("data.idx");
    save_index(&index, &path)?;
    let bytes = write_index(&index)?;
    println!("index: {} bytes, {} trie nodes over {} shards", bytes.len(), index.node_count(), index.shards.len());
    println!("manifest: {}", serde_json::to_string(&index.manifest)?);

    let back = load_index(&path)?;
    let q = &data.as_slice()[0].points;
    let (a, b) = (index.query(q, 5)?, back.query(q, 5)?);
    println!("reloaded answers identical: {}", a.hits == b.hits);

    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
