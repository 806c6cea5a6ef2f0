//! Coordinator: builds one annotated trie per shard, fans queries out to
//! every shard in parallel and merges the local top-k lists.

mod bench;
mod ingest;
mod persist;
mod synth;

pub use bench::{bench, BenchReport, BenchRow};
pub use ingest::{ingest, parse_trajectories, preprocess, write_trajectories, IngestOptions, IngestReport};
pub use persist::{load_index, read_index, save_index, write_index, INDEX_MAGIC, INDEX_VERSION};
pub use synth::{generate, perturbed_queries, SynthParams};

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::codec::Writer;
use crate::error::{Error, Result};
use crate::model::{build_grid, Dataset, GridConfig, Measure, Point, Trajectory};
use crate::partition::{partition, PartitionAssignment, Strategy};
use crate::search::{top_k_search, Hit, QueryContext, ResultHeap, SearchStats};
use crate::trie::{
    annotate, build_optimized_trie, build_trie, decode_payload, encode_payload, select_pivots, PivotSet,
    RpTrie, TriePayload, DEFAULT_DENSE_LEVELS,
};
use crate::zorder::{to_reference, RefForm};

/// Everything that determines an index besides the data.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuildParams {
    pub measure: Measure,
    /// Requested cell side; the effective side may be smaller.
    pub delta: f64,
    pub partitions: usize,
    /// Ignored (forced to 0) for DTW.
    pub pivots: usize,
    pub pivot_groups: usize,
    pub strategy: Strategy,
    /// Greedy trie construction; only affects Hausdorff.
    pub optimize_trie: bool,
    pub seed: u64,
    /// Trie levels stored as bitmaps in persisted payloads.
    pub dense_levels: u8,
}

impl BuildParams {
    pub fn new(measure: Measure, delta: f64) -> Self {
        BuildParams {
            measure,
            delta,
            partitions: 64,
            pivots: 5,
            pivot_groups: 10,
            strategy: Strategy::Hetero,
            optimize_trie: true,
            seed: 0,
            dense_levels: DEFAULT_DENSE_LEVELS,
        }
    }

    pub fn effective_pivots(&self) -> usize {
        if self.measure.is_metric() {
            self.pivots
        } else {
            0
        }
    }
}

/// Provenance stored next to a persisted index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub params: BuildParams,
    pub grid: GridConfig,
    pub n_trajectories: usize,
    pub shard_sizes: Vec<usize>,
    pub pivot_ids: Vec<u64>,
    /// Hex SHA-256 of the canonical binary encoding of the dataset.
    pub dataset_sha256: String,
}

/// One partition: its trie and the trajectories its leaves refer to.
#[derive(Clone, Debug)]
pub struct Shard {
    pub trie: RpTrie,
    pub data: Dataset,
}

#[derive(Clone, Debug)]
pub struct PartitionedIndex {
    pub grid: GridConfig,
    pub measure: Measure,
    pub pivots: PivotSet,
    pub assignment: PartitionAssignment,
    pub shards: Vec<Shard>,
    pub manifest: Manifest,
    pub dataset: Dataset,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QueryResult {
    pub hits: Vec<Hit>,
    /// Totals over all shards.
    pub stats: SearchStats,
    pub shard_stats: Vec<SearchStats>,
    pub elapsed: Duration,
}

/// Hex SHA-256 over ids and coordinates, in id order.
pub fn dataset_sha256(dataset: &Dataset) -> String {
    let mut sorted: Vec<&Trajectory> = dataset.iter().collect();
    sorted.sort_unstable_by_key(|t| t.id);
    let mut hasher = Sha256::new();
    for t in sorted {
        let mut w = Writer::new();
        w.trajectory(t);
        hasher.update(w.into_inner());
    }
    hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn build_shard(
    members: &[u64],
    dataset: &Dataset,
    grid: &GridConfig,
    pivots: &PivotSet,
    params: &BuildParams,
) -> Result<Shard> {
    let data = Dataset::new(
        members
            .iter()
            .map(|id| dataset.get(*id).expect("assignment ids come from the dataset").clone())
            .collect(),
    )?;
    let measure = params.measure;
    if data.is_empty() {
        return Ok(Shard {
            trie: RpTrie::empty(RefForm::for_measure(measure), pivots.len()),
            data,
        });
    }
    let refs = data
        .iter()
        .map(|t| to_reference(t, grid, measure))
        .collect::<Result<Vec<_>>>()?;
    let trie = if measure == Measure::Hausdorff && params.optimize_trie {
        let zsets: Vec<_> = refs.into_iter().map(|r| (r.source_id, r.zvals)).collect();
        build_optimized_trie(&zsets)?
    } else {
        build_trie(&refs)?
    };
    let trie = annotate(trie, pivots, measure, grid, &data)?;
    Ok(Shard { trie, data })
}

/// Builds a partitioned index; shards are built concurrently and the result
/// depends only on the dataset and `params`.
pub fn build_index(dataset: &Dataset, params: &BuildParams) -> Result<PartitionedIndex> {
    let bbox = dataset
        .bbox()
        .ok_or_else(|| Error::input("cannot index an empty dataset"))?;
    build_index_with_grid(dataset, build_grid(&bbox, params.delta)?, params)
}

/// Like [`build_index`] but on a caller-supplied grid; `params.delta` is
/// only recorded. Points outside the grid are clamped onto its edge cells.
pub fn build_index_with_grid(dataset: &Dataset, grid: GridConfig, params: &BuildParams) -> Result<PartitionedIndex> {
    if dataset.is_empty() {
        return Err(Error::input("cannot index an empty dataset"));
    }
    if params.partitions == 0 {
        return Err(Error::config("partition count must be at least 1"));
    }
    let measure = params.measure;
    let pivots = match params.effective_pivots() {
        0 => PivotSet::empty(),
        n => select_pivots(dataset.as_slice(), n, params.pivot_groups, measure, params.seed)?,
    };
    let assignment = partition(dataset, &grid, params.strategy, params.partitions, params.seed)?;
    let shards = assignment
        .members()
        .par_iter()
        .map(|members| build_shard(members, dataset, &grid, &pivots, params))
        .collect::<Result<Vec<_>>>()?;
    let manifest = Manifest {
        params: *params,
        grid,
        n_trajectories: dataset.len(),
        shard_sizes: assignment.sizes.clone(),
        pivot_ids: pivots.pivots.iter().map(|t| t.id).collect(),
        dataset_sha256: dataset_sha256(dataset),
    };
    Ok(PartitionedIndex {
        grid,
        measure,
        pivots,
        assignment,
        shards,
        manifest,
        dataset: dataset.clone(),
    })
}

impl PartitionedIndex {
    pub fn len(&self) -> usize {
        self.dataset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dataset.is_empty()
    }

    pub fn node_count(&self) -> usize {
        self.shards.iter().map(|s| s.trie.node_count()).sum()
    }

    /// Exact global top-k: every shard returns its local top-k and the
    /// lists are merged under (distance, id).
    pub fn query(&self, query: &[Point], k: usize) -> Result<QueryResult> {
        let start = Instant::now();
        if k < 1 {
            return Err(Error::input("k must be at least 1"));
        }
        if query.is_empty() {
            return Err(Error::input("query trajectory is empty"));
        }
        let d_qp = if self.pivots.is_empty() {
            None
        } else {
            Some(self.pivots.distances_to(query, self.measure)?)
        };
        let ctx = QueryContext {
            query,
            measure: self.measure,
            grid: &self.grid,
            d_qp: d_qp.as_deref(),
        };
        let outcomes = self
            .shards
            .par_iter()
            .map(|s| {
                if s.data.is_empty() {
                    Ok(Default::default())
                } else {
                    top_k_search(&s.trie, &s.data, &ctx, k).map(|o| (o.hits, o.stats))
                }
            })
            .collect::<Result<Vec<(Vec<Hit>, SearchStats)>>>()?;
        let mut heap = ResultHeap::new(k);
        let mut stats = SearchStats::default();
        let mut shard_stats = Vec::with_capacity(outcomes.len());
        for (hits, s) in outcomes {
            hits.into_iter().for_each(|h| heap.offer(h));
            stats.merge(&s);
            shard_stats.push(s);
        }
        Ok(QueryResult {
            hits: heap.into_sorted(),
            stats,
            shard_stats,
            elapsed: start.elapsed(),
        })
    }

    /// Re-encodes every shard through the persisted succinct payload and
    /// decodes it again.
    pub fn succinct_round_trip(&self) -> Result<PartitionedIndex> {
        let shards = self
            .shards
            .par_iter()
            .map(|s| {
                let bytes = encode_payload(&self.payload(s))?;
                let back = decode_payload(&bytes)?;
                Ok(Shard {
                    trie: back.trie,
                    data: s.data.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PartitionedIndex {
            shards,
            ..self.clone()
        })
    }

    pub(crate) fn payload(&self, shard: &Shard) -> TriePayload {
        TriePayload {
            grid: self.grid,
            measure: self.measure,
            pivots: self.pivots.clone(),
            dense_levels: self.manifest.params.dense_levels,
            trie: shard.trie.clone(),
        }
    }
}

/// Brute-force exact top-k; the reference every indexed query must match.
pub fn linear_scan(dataset: &Dataset, query: &[Point], k: usize, measure: Measure) -> Result<QueryResult> {
    let start = Instant::now();
    if k < 1 {
        return Err(Error::input("k must be at least 1"));
    }
    if query.is_empty() {
        return Err(Error::input("query trajectory is empty"));
    }
    let mut heap = ResultHeap::new(k);
    for t in dataset {
        heap.offer(Hit {
            id: t.id,
            distance: measure.distance_unchecked(query, &t.points),
        });
    }
    let stats = SearchStats {
        exact_distances: dataset.len(),
        ..SearchStats::default()
    };
    Ok(QueryResult {
        hits: heap.into_sorted(),
        stats,
        shard_stats: vec![stats],
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::table2;

    fn table2_params(n_g: usize) -> BuildParams {
        BuildParams {
            partitions: n_g,
            pivots: 2,
            pivot_groups: 3,
            ..BuildParams::new(Measure::Hausdorff, 1.0)
        }
    }

    #[test]
    fn running_example_any_partitioning() {
        let (data, q) = table2();
        for n_g in [1, 2, 4, 5] {
            for strategy in Strategy::ALL {
                let params = BuildParams { strategy, ..table2_params(n_g) };
                let index = build_index(&data, &params).unwrap();
                let r = index.query(&q.points, 2).unwrap();
                let ids: Vec<u64> = r.hits.iter().map(|h| h.id).collect();
                assert_eq!(ids, vec![1, 4]);
                assert!((r.hits[0].distance - 2.83).abs() < 0.01);
                assert!((r.hits[1].distance - 3.16).abs() < 0.01);
                assert!(r.stats.exact_distances <= 5);
                assert_eq!(r.shard_stats.len(), n_g);
            }
        }
    }

    #[test]
    fn linear_scan_distances() {
        let (data, q) = table2();
        let r = linear_scan(&data, &q.points, 5, Measure::Hausdorff).unwrap();
        let mut by_id: Vec<(u64, f64)> = r.hits.iter().map(|h| (h.id, h.distance)).collect();
        by_id.sort_by_key(|&(id, _)| id);
        for ((_, d), want) in by_id.iter().zip([2.83, 6.08, 6.71, 3.16, 6.08]) {
            assert!((d - want).abs() < 0.01);
        }
        // tie between 2 and 5 breaks by id
        let order: Vec<u64> = r.hits.iter().map(|h| h.id).collect();
        assert_eq!(order, vec![1, 4, 2, 5, 3]);
        assert!(linear_scan(&data, &q.points, 0, Measure::Hausdorff).is_err());
    }

    #[test]
    fn every_trajectory_in_one_shard() {
        let (data, _) = table2();
        for m in Measure::ALL {
            let index = build_index(&data, &BuildParams { measure: m, ..table2_params(3) }).unwrap();
            let mut all: Vec<u64> = index.shards.iter().flat_map(|s| s.trie.subtree_tids(RpTrie::ROOT)).collect();
            all.sort_unstable();
            assert_eq!(all, vec![1, 2, 3, 4, 5]);
            assert_eq!(index.pivots.len(), if m == Measure::Dtw { 0 } else { 2 });
        }
    }

    #[test]
    fn empty_shards_are_harmless() {
        let (data, q) = table2();
        let params = BuildParams { strategy: Strategy::Homo, ..table2_params(4) };
        let index = build_index(&data, &params).unwrap();
        assert!(index.assignment.sizes.contains(&0));
        let r = index.query(&q.points, 5).unwrap();
        assert_eq!(r.hits, linear_scan(&data, &q.points, 5, Measure::Hausdorff).unwrap().hits);
        let rt = index.succinct_round_trip().unwrap();
        assert_eq!(rt.query(&q.points, 5).unwrap().hits, r.hits);
    }

    #[test]
    fn explicit_grid() {
        let (data, q) = table2();
        let g = crate::fixtures::running_grid();
        let index = build_index_with_grid(&data, g, &table2_params(1)).unwrap();
        assert_eq!(index.grid, g);
        let r = index.query(&q.points, 2).unwrap();
        assert_eq!(r.hits.iter().map(|h| h.id).collect::<Vec<_>>(), vec![1, 4]);
    }

    #[test]
    fn checksum_is_order_independent() {
        let (data, _) = table2();
        let mut rev = data.clone().into_inner();
        rev.reverse();
        assert_eq!(dataset_sha256(&data), dataset_sha256(&Dataset::new(rev).unwrap()));
        assert_eq!(dataset_sha256(&data).len(), 64);
    }
}
