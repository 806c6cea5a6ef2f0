//! Seeded synthetic workloads: Gaussian clusters of random-walk trajectories.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Dataset, Point, Trajectory};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthParams {
    pub clusters: usize,
    pub per_cluster: usize,
    /// Inclusive point-count range.
    pub len_min: usize,
    pub len_max: usize,
    /// Cluster centers are uniform over `[0, extent]²`.
    pub extent: f64,
    /// Standard deviation of start points around their cluster center.
    pub spread: f64,
    /// Standard deviation of each random-walk step, per axis.
    pub step: f64,
    pub seed: u64,
}

impl Default for SynthParams {
    fn default() -> Self {
        SynthParams {
            clusters: 50,
            per_cluster: 100,
            len_min: 10,
            len_max: 50,
            extent: 1000.0,
            spread: 5.0,
            step: 1.0,
            seed: 0,
        }
    }
}

fn normal(sd: f64) -> Result<Normal<f64>> {
    if !(sd.is_finite() && sd >= 0.0) {
        return Err(Error::config(format!("invalid standard deviation {sd}")));
    }
    Normal::new(0.0, sd).map_err(|e| Error::config(format!("invalid standard deviation {sd}: {e}")))
}

/// Ids run from 0 in cluster order.
pub fn generate(p: &SynthParams) -> Result<Dataset> {
    if p.clusters == 0 || p.per_cluster == 0 {
        return Err(Error::config("cluster and per-cluster counts must be positive"));
    }
    if p.len_min == 0 || p.len_min > p.len_max {
        return Err(Error::config(format!("invalid length range {}:{}", p.len_min, p.len_max)));
    }
    if !(p.extent.is_finite() && p.extent > 0.0) {
        return Err(Error::config(format!("invalid extent {}", p.extent)));
    }
    let start = normal(p.spread)?;
    let step = normal(p.step)?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut out = Vec::with_capacity(p.clusters * p.per_cluster);
    for _ in 0..p.clusters {
        let cx = rng.random_range(0.0..p.extent);
        let cy = rng.random_range(0.0..p.extent);
        for _ in 0..p.per_cluster {
            let len = rng.random_range(p.len_min..=p.len_max);
            let mut x = cx + start.sample(&mut rng);
            let mut y = cy + start.sample(&mut rng);
            let mut points = Vec::with_capacity(len);
            for _ in 0..len {
                points.push(Point::new(x, y));
                x += step.sample(&mut rng);
                y += step.sample(&mut rng);
            }
            out.push(Trajectory::new(out.len() as u64, points));
        }
    }
    Dataset::new(out)
}

/// `n` queries made by jittering randomly chosen dataset trajectories with
/// Gaussian noise of standard deviation `noise`.
pub fn perturbed_queries(dataset: &Dataset, n: usize, noise: f64, seed: u64) -> Result<Vec<Trajectory>> {
    if dataset.is_empty() {
        return Err(Error::input("cannot draw queries from an empty dataset"));
    }
    let jitter = normal(noise)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n)
        .map(|i| {
            let src = &dataset.as_slice()[rng.random_range(0..dataset.len())];
            let points = src
                .points
                .iter()
                .map(|p| Point::new(p.x + jitter.sample(&mut rng), p.y + jitter.sample(&mut rng)))
                .collect();
            Trajectory::new(i as u64, points)
        })
        .collect())
}
