use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::Trajectory;
use crate::search::SearchStats;

use super::{linear_scan, PartitionedIndex};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub query_id: u64,
    pub mean_ms: f64,
    pub min_ms: f64,
    pub max_ms: f64,
    pub scan_mean_ms: f64,
    /// Linear-scan time over index time.
    pub speedup: f64,
    pub stats: SearchStats,
    /// Whether the indexed answer equalled the linear scan.
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchReport {
    pub k: usize,
    pub repeats: usize,
    pub n_trajectories: usize,
    pub n_partitions: usize,
    pub rows: Vec<BenchRow>,
    pub mean_ms: f64,
    pub scan_mean_ms: f64,
    pub mean_speedup: f64,
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

/// Times every query `repeats` times against the index and the linear scan.
pub fn bench(index: &PartitionedIndex, queries: &[Trajectory], k: usize, repeats: usize) -> Result<BenchReport> {
    if queries.is_empty() {
        return Err(Error::input("bench needs at least one query"));
    }
    if repeats == 0 {
        return Err(Error::config("repeats must be at least 1"));
    }
    let mut rows = Vec::with_capacity(queries.len());
    for q in queries {
        let mut times = Vec::with_capacity(repeats);
        let mut scan_total = Duration::ZERO;
        let mut last = None;
        let mut oracle = None;
        for _ in 0..repeats {
            let t = Instant::now();
            let r = index.query(&q.points, k)?;
            times.push(ms(t.elapsed()));
            last = Some(r);
            let t = Instant::now();
            let s = linear_scan(&index.dataset, &q.points, k, index.measure)?;
            scan_total += t.elapsed();
            oracle = Some(s);
        }
        let (r, s) = (last.expect("repeats > 0"), oracle.expect("repeats > 0"));
        let mean_ms = times.iter().sum::<f64>() / repeats as f64;
        let scan_mean_ms = ms(scan_total) / repeats as f64;
        rows.push(BenchRow {
            query_id: q.id,
            mean_ms,
            min_ms: times.iter().copied().fold(f64::INFINITY, f64::min),
            max_ms: times.iter().copied().fold(0.0, f64::max),
            scan_mean_ms,
            speedup: scan_mean_ms / mean_ms.max(1e-9),
            stats: r.stats,
            exact: r.hits == s.hits,
        });
    }
    let n = rows.len() as f64;
    Ok(BenchReport {
        k,
        repeats,
        n_trajectories: index.len(),
        n_partitions: index.shards.len(),
        mean_ms: rows.iter().map(|r| r.mean_ms).sum::<f64>() / n,
        scan_mean_ms: rows.iter().map(|r| r.scan_mean_ms).sum::<f64>() / n,
        mean_speedup: rows.iter().map(|r| r.speedup).sum::<f64>() / n,
        rows,
    })
}
