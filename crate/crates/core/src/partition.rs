//! Splitting a dataset into shards.
//!
//! The heterogeneous strategy first groups similar trajectories by the cells
//! they visit on a progressively coarser grid, then deals each group out
//! round-robin so that every shard holds a slice of every dense region.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Dataset, GridConfig};
use crate::zorder::{cell_of, ZValue};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Cluster, then round-robin over the cluster-sorted order.
    Hetero,
    /// Whole clusters packed into consecutive shards.
    Homo,
    /// Seeded shuffle, then round-robin.
    Random,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Hetero, Strategy::Homo, Strategy::Random];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Hetero => "hetero",
            Strategy::Homo => "homo",
            Strategy::Random => "random",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hetero" | "heterogeneous" => Ok(Strategy::Hetero),
            "homo" | "homogeneous" => Ok(Strategy::Homo),
            "random" => Ok(Strategy::Random),
            other => Err(Error::config(format!("unknown partition strategy `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterAssignment {
    pub cluster_of: BTreeMap<u64, usize>,
    /// Grid bits per axis at which clustering stopped; 0 is a single cell.
    pub granularity: u32,
}

impl ClusterAssignment {
    pub fn cluster_count(&self) -> usize {
        self.cluster_of.values().max().map_or(0, |&c| c + 1)
    }

    /// Member ids of every cluster, ascending.
    pub fn clusters(&self) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new(); self.cluster_count()];
        for (&id, &c) in &self.cluster_of {
            out[c].push(id);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionAssignment {
    pub partition_of: BTreeMap<u64, usize>,
    pub sizes: Vec<usize>,
}

impl PartitionAssignment {
    /// Builds an assignment from `(id, partition)` pairs.
    pub fn from_pairs(n_partitions: usize, pairs: impl IntoIterator<Item = (u64, usize)>) -> Result<Self> {
        if n_partitions == 0 {
            return Err(Error::config("partition count must be at least 1"));
        }
        let mut sizes = vec![0; n_partitions];
        let mut partition_of = BTreeMap::new();
        for (id, p) in pairs {
            if p >= n_partitions {
                return Err(Error::input(format!(
                    "trajectory {id} assigned to partition {p} of {n_partitions}"
                )));
            }
            if partition_of.insert(id, p).is_some() {
                return Err(Error::input(format!("trajectory {id} assigned twice")));
            }
            sizes[p] += 1;
        }
        Ok(PartitionAssignment { partition_of, sizes })
    }

    pub fn n_partitions(&self) -> usize {
        self.sizes.len()
    }

    /// Ids of every partition, ascending.
    pub fn members(&self) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new(); self.sizes.len()];
        for (&id, &p) in &self.partition_of {
            out[p].push(id);
        }
        out
    }

    /// `max(sizes) - min(sizes)`.
    pub fn imbalance(&self) -> usize {
        let max = self.sizes.iter().max().copied().unwrap_or(0);
        let min = self.sizes.iter().min().copied().unwrap_or(0);
        max - min
    }
}

/// Cluster count the heterogeneous strategy aims for.
pub fn cluster_target(n: usize, n_partitions: usize) -> usize {
    (n / n_partitions.max(1)).max(1)
}

/// Groups trajectories whose ordered, duplicate-free cell signatures agree,
/// coarsening the grid one bit per axis at a time until at most `target`
/// groups remain. Cluster ids follow the lexicographic order of signatures.
pub fn cluster_by_coarsening(
    dataset: &Dataset,
    grid: &GridConfig,
    target: usize,
) -> Result<ClusterAssignment> {
    if target == 0 {
        return Err(Error::config("cluster target must be at least 1"));
    }
    let fine: Vec<Vec<ZValue>> = dataset
        .iter()
        .map(|t| t.points.iter().map(|p| cell_of(p, grid)).collect())
        .collect();

    let mut level = grid.bits;
    loop {
        let drop = grid.bits - level;
        let signatures: Vec<Vec<ZValue>> = fine
            .iter()
            .map(|cells| {
                let mut sig: Vec<ZValue> = Vec::new();
                for z in cells {
                    let c = z.coarsen(drop);
                    if !sig.contains(&c) {
                        sig.push(c);
                    }
                }
                sig
            })
            .collect();
        let mut distinct: Vec<&Vec<ZValue>> = signatures.iter().collect();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() <= target || level == 0 {
            let id_of: HashMap<&Vec<ZValue>, usize> =
                distinct.iter().enumerate().map(|(i, s)| (*s, i)).collect();
            let cluster_of = dataset
                .iter()
                .zip(&signatures)
                .map(|(t, s)| (t.id, id_of[s]))
                .collect();
            return Ok(ClusterAssignment {
                cluster_of,
                granularity: level,
            });
        }
        level -= 1;
    }
}

fn cluster_sorted(clusters: &ClusterAssignment) -> Vec<u64> {
    let mut order: Vec<(usize, u64)> = clusters.cluster_of.iter().map(|(&id, &c)| (c, id)).collect();
    order.sort_unstable();
    order.into_iter().map(|(_, id)| id).collect()
}

fn check_coverage(dataset: &Dataset, clusters: &ClusterAssignment) -> Result<()> {
    if clusters.cluster_of.len() != dataset.len()
        || dataset.iter().any(|t| !clusters.cluster_of.contains_key(&t.id))
    {
        return Err(Error::input("cluster assignment does not cover the dataset"));
    }
    Ok(())
}

/// Position `i` of the (cluster, id) order goes to partition `i mod N_G`.
pub fn partition_heterogeneous(
    dataset: &Dataset,
    clusters: &ClusterAssignment,
    n_partitions: usize,
) -> Result<PartitionAssignment> {
    check_coverage(dataset, clusters)?;
    let order = cluster_sorted(clusters);
    PartitionAssignment::from_pairs(
        n_partitions,
        order.into_iter().enumerate().map(|(i, id)| (id, i % n_partitions.max(1))),
    )
}

/// Position `i` of the (cluster, id) order goes to partition
/// `i / ceil(N / N_G)`, so clusters stay together until a shard fills up.
pub fn partition_homogeneous(
    dataset: &Dataset,
    clusters: &ClusterAssignment,
    n_partitions: usize,
) -> Result<PartitionAssignment> {
    check_coverage(dataset, clusters)?;
    let cap = dataset.len().div_ceil(n_partitions.max(1)).max(1);
    let order = cluster_sorted(clusters);
    PartitionAssignment::from_pairs(
        n_partitions,
        order.into_iter().enumerate().map(|(i, id)| (id, i / cap)),
    )
}

/// Seeded shuffle of the ids followed by round-robin.
pub fn partition_random(dataset: &Dataset, n_partitions: usize, seed: u64) -> Result<PartitionAssignment> {
    let mut ids: Vec<u64> = dataset.iter().map(|t| t.id).collect();
    ids.sort_unstable();
    ids.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    PartitionAssignment::from_pairs(
        n_partitions,
        ids.into_iter().enumerate().map(|(i, id)| (id, i % n_partitions.max(1))),
    )
}

/// Runs the whole strategy, clustering first where needed.
pub fn partition(
    dataset: &Dataset,
    grid: &GridConfig,
    strategy: Strategy,
    n_partitions: usize,
    seed: u64,
) -> Result<PartitionAssignment> {
    if n_partitions == 0 {
        return Err(Error::config("partition count must be at least 1"));
    }
    match strategy {
        Strategy::Random => partition_random(dataset, n_partitions, seed),
        Strategy::Hetero | Strategy::Homo => {
            let clusters = cluster_by_coarsening(dataset, grid, cluster_target(dataset.len(), n_partitions))?;
            if strategy == Strategy::Hetero {
                partition_heterogeneous(dataset, &clusters, n_partitions)
            } else {
                partition_homogeneous(dataset, &clusters, n_partitions)
            }
        }
    }
}
