use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use trajsearch::engine::{
    bench, build_index, generate, ingest, linear_scan, load_index, save_index, write_trajectories, BuildParams,
    IngestOptions, QueryResult, SynthParams,
};
use trajsearch::{Measure, Strategy, Trajectory};

#[derive(Parser)]
#[command(name = "trajsearch", version, about = "Exact top-k trajectory similarity search")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct IngestArgs {
    /// Drop trajectories with fewer points.
    #[arg(long, default_value_t = 10)]
    min_len: usize,
    /// Split trajectories with more points.
    #[arg(long, default_value_t = 1000)]
    max_len: usize,
}

impl IngestArgs {
    fn options(&self) -> IngestOptions {
        IngestOptions {
            min_len: self.min_len,
            max_len: self.max_len,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a partitioned index from a trajectory file.
    Build {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        measure: Measure,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 64)]
        partitions: usize,
        #[arg(long, default_value_t = 5)]
        pivots: usize,
        #[arg(long, default_value_t = 10)]
        pivot_groups: usize,
        #[arg(long, default_value = "hetero")]
        strategy: Strategy,
        #[arg(long)]
        optimize_trie: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        ingest: IngestArgs,
    },
    /// Answer every trajectory in a query file against an index.
    Query {
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        query: PathBuf,
        #[arg(long, default_value_t = 100)]
        k: usize,
        /// Emit one JSON object per query with search counters.
        #[arg(long)]
        stats: bool,
    },
    /// Brute-force linear scan.
    Scan {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        query: PathBuf,
        #[arg(long, default_value_t = 100)]
        k: usize,
        #[arg(long)]
        measure: Measure,
        #[command(flatten)]
        ingest: IngestArgs,
    },
    /// Time queries against the index and the linear scan.
    Bench {
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        queries: PathBuf,
        #[arg(long, default_value_t = 100)]
        k: usize,
        #[arg(long, default_value_t = 20)]
        repeats: usize,
    },
    /// Write a synthetic clustered workload.
    Gen {
        #[arg(long, default_value_t = 50)]
        clusters: usize,
        #[arg(long, default_value_t = 100)]
        per_cluster: usize,
        /// Inclusive point-count range `A:B`.
        #[arg(long, default_value = "10:50", value_parser = parse_range)]
        len_range: (usize, usize),
        #[arg(long, default_value_t = 1000.0)]
        extent: f64,
        #[arg(long, default_value_t = 5.0)]
        spread: f64,
        #[arg(long, default_value_t = 1.0)]
        step: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(':').ok_or("expected A:B")?;
    let a = a.parse().map_err(|_| format!("invalid bound `{a}`"))?;
    let b = b.parse().map_err(|_| format!("invalid bound `{b}`"))?;
    Ok((a, b))
}

fn read_queries(path: &PathBuf) -> Result<Vec<Trajectory>> {
    let (q, _) = ingest(path, &IngestOptions::keep_all())
        .with_context(|| format!("reading queries from {}", path.display()))?;
    Ok(q.into_inner())
}

fn print_hits(out: &mut impl Write, query: &Trajectory, r: &QueryResult, stats: bool) -> Result<()> {
    if stats {
        let line = json!({
            "query_id": query.id,
            "hits": r.hits,
            "stats": r.stats,
            "shard_stats": r.shard_stats,
            "elapsed_ms": r.elapsed.as_secs_f64() * 1e3,
        });
        writeln!(out, "{line}")?;
    } else {
        for (rank, h) in r.hits.iter().enumerate() {
            writeln!(out, "{}\t{}\t{}\t{}", query.id, rank + 1, h.id, h.distance)?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match cli.cmd {
        Cmd::Build {
            input,
            measure,
            delta,
            partitions,
            pivots,
            pivot_groups,
            strategy,
            optimize_trie,
            seed,
            out: path,
            ingest: ia,
        } => {
            let (data, report) =
                ingest(&input, &ia.options()).with_context(|| format!("reading {}", input.display()))?;
            let params = BuildParams {
                measure,
                delta,
                partitions,
                pivots,
                pivot_groups,
                strategy,
                optimize_trie,
                seed,
                ..BuildParams::new(measure, delta)
            };
            let index = build_index(&data, &params)?;
            save_index(&index, &path).with_context(|| format!("writing {}", path.display()))?;
            let summary = json!({
                "ingest": report,
                "trajectories": index.len(),
                "partitions": index.shards.len(),
                "nodes": index.node_count(),
                "grid_cells_per_axis": index.grid.level_l,
                "cell_size": index.grid.cell_size,
            });
            writeln!(out, "{summary}")?;
        }
        Cmd::Query { index, query, k, stats } => {
            let idx = load_index(&index).with_context(|| format!("loading {}", index.display()))?;
            for q in read_queries(&query)? {
                let r = idx.query(&q.points, k)?;
                print_hits(&mut out, &q, &r, stats)?;
            }
        }
        Cmd::Scan {
            input,
            query,
            k,
            measure,
            ingest: ia,
        } => {
            let (data, _) = ingest(&input, &ia.options()).with_context(|| format!("reading {}", input.display()))?;
            for q in read_queries(&query)? {
                let r = linear_scan(&data, &q.points, k, measure)?;
                print_hits(&mut out, &q, &r, false)?;
            }
        }
        Cmd::Bench { index, queries, k, repeats } => {
            let idx = load_index(&index).with_context(|| format!("loading {}", index.display()))?;
            let report = bench(&idx, &read_queries(&queries)?, k, repeats)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
        }
        Cmd::Gen {
            clusters,
            per_cluster,
            len_range: (len_min, len_max),
            extent,
            spread,
            step,
            seed,
            out: path,
        } => {
            let data = generate(&SynthParams {
                clusters,
                per_cluster,
                len_min,
                len_max,
                extent,
                spread,
                step,
                seed,
            })?;
            let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
            let mut w = BufWriter::new(file);
            write_trajectories(&mut w, &data)?;
            w.flush()?;
        }
    }
    if let Err(e) = out.flush() {
        if e.kind() != io::ErrorKind::BrokenPipe {
            bail!(e);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let msg = e.to_string();
            eprintln!("{}", msg.lines().next().unwrap_or("invalid arguments"));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
