use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{Measure, Trajectory};

/// Global pivot trajectories shared by every shard of an index.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PivotSet {
    pub pivots: Vec<Trajectory>,
    /// Sum of pairwise pivot distances under the build measure.
    pub score: f64,
}

impl PivotSet {
    pub fn empty() -> Self {
        PivotSet::default()
    }

    pub fn len(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pivots.is_empty()
    }

    /// Distance from `query` to every pivot, in pivot order.
    pub fn distances_to(&self, query: &[crate::model::Point], measure: Measure) -> Result<Vec<f64>> {
        self.pivots
            .iter()
            .map(|p| measure.distance(query, &p.points))
            .collect()
    }
}

pub(crate) fn pairwise_score(group: &[&Trajectory], measure: Measure) -> f64 {
    let mut score = 0.0;
    for (i, a) in group.iter().enumerate() {
        for b in &group[i + 1..] {
            score += measure.distance_unchecked(&a.points, &b.points);
        }
    }
    score
}

/// Samples `groups` random subsets of `n_pivots` trajectories and keeps the
/// one with the largest sum of pairwise distances (first wins on ties).
pub fn select_pivots(
    dataset: &[Trajectory],
    n_pivots: usize,
    groups: usize,
    measure: Measure,
    seed: u64,
) -> Result<PivotSet> {
    if !measure.is_metric() {
        return Err(Error::config(format!(
            "pivot pruning needs a metric measure, got {measure}"
        )));
    }
    if n_pivots > dataset.len() {
        return Err(Error::config(format!(
            "{n_pivots} pivots requested from {} trajectories",
            dataset.len()
        )));
    }
    if n_pivots == 0 {
        return Ok(PivotSet::empty());
    }
    if groups == 0 {
        return Err(Error::config("pivot group count must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, Vec<usize>)> = None;
    for _ in 0..groups {
        let mut picked = index::sample(&mut rng, dataset.len(), n_pivots).into_vec();
        picked.sort_unstable();
        let members: Vec<&Trajectory> = picked.iter().map(|&i| &dataset[i]).collect();
        let score = pairwise_score(&members, measure);
        if best.as_ref().is_none_or(|(s, _)| score > *s) {
            best = Some((score, picked));
        }
    }
    let (score, picked) = best.expect("at least one group sampled");
    Ok(PivotSet {
        pivots: picked.into_iter().map(|i| dataset[i].clone()).collect(),
        score,
    })
}
