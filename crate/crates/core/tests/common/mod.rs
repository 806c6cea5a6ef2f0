#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trajsearch::engine::{generate, SynthParams};
use trajsearch::{Dataset, Hit, Point, Trajectory};

/// Uniform random walks over `[0, extent]²`.
pub fn random_dataset(n: usize, len: std::ops::RangeInclusive<usize>, extent: f64, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let trajs = (0..n as u64)
        .map(|id| random_walk(&mut rng, id, len.clone(), extent))
        .collect();
    Dataset::new(trajs).unwrap()
}

pub fn random_walk(rng: &mut ChaCha8Rng, id: u64, len: std::ops::RangeInclusive<usize>, extent: f64) -> Trajectory {
    let n = rng.random_range(len);
    let mut x = rng.random_range(0.0..extent);
    let mut y = rng.random_range(0.0..extent);
    let step = extent / 20.0;
    let points = (0..n)
        .map(|_| {
            x = (x + rng.random_range(-step..step)).clamp(0.0, extent);
            y = (y + rng.random_range(-step..step)).clamp(0.0, extent);
            Point::new(x, y)
        })
        .collect();
    Trajectory::new(id, points)
}

pub fn clustered(n_clusters: usize, per_cluster: usize, len_min: usize, len_max: usize, seed: u64) -> Dataset {
    generate(&SynthParams {
        clusters: n_clusters,
        per_cluster,
        len_min,
        len_max,
        seed,
        ..SynthParams::default()
    })
    .unwrap()
}

pub fn assert_same_hits(got: &[Hit], want: &[Hit], ctx: &str) {
    assert_eq!(got.len(), want.len(), "{ctx}: lengths differ");
    for (g, w) in got.iter().zip(want) {
        assert_eq!(g.id, w.id, "{ctx}: ids differ\n got {got:?}\nwant {want:?}");
        assert!((g.distance - w.distance).abs() <= 1e-9, "{ctx}: distance {} vs {}", g.distance, w.distance);
    }
}
