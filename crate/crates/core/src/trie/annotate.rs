use super::{PivotRange, PivotSet, RpTrie};
use crate::error::{Error, Result};
use crate::model::{Dataset, GridConfig, Measure, Point};
use crate::zorder::cell_center;

/// Fills in pivot ranges on every node and `d_max` on every leaf.
///
/// Pivot distances are taken from each leaf's reference (its path cells as
/// center points) and merged upwards; `d_max` compares the reference with
/// the original member trajectories looked up in `dataset`.
pub fn annotate(
    mut trie: RpTrie,
    pivots: &PivotSet,
    measure: Measure,
    grid: &GridConfig,
    dataset: &Dataset,
) -> Result<RpTrie> {
    if !pivots.is_empty() && !measure.is_metric() {
        return Err(Error::config(format!("{measure} cannot use pivot ranges")));
    }
    let n_p = pivots.len();
    for (leaf, path) in trie.leaf_paths() {
        let reference: Vec<Point> = path.iter().map(|&z| cell_center(z, grid)).collect();
        let mut d_max = 0.0f64;
        for &tid in &trie.node(leaf).tids {
            let member = dataset
                .get(tid)
                .ok_or_else(|| Error::input(format!("trajectory {tid} missing from dataset")))?;
            d_max = d_max.max(measure.distance(&member.points, &reference)?);
        }
        let hr = pivots
            .pivots
            .iter()
            .map(|p| measure.distance(&reference, &p.points).map(PivotRange::point))
            .collect::<Result<Vec<_>>>()?;
        let node = trie.node_mut(leaf);
        node.d_max = d_max;
        node.hr = hr;
    }
    // canonical order puts children after parents
    for id in (0..trie.node_count()).rev() {
        let node = trie.node(id as u32);
        if node.is_leaf() {
            continue;
        }
        let mut hr = vec![PivotRange::EMPTY; n_p];
        for &c in &node.children {
            for (acc, r) in hr.iter_mut().zip(&trie.node(c).hr) {
                acc.merge(r);
            }
        }
        let node = trie.node_mut(id as u32);
        node.hr = hr;
        node.d_max = 0.0;
    }
    Ok(trie)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{running_grid, table2};
    use crate::model::{build_grid_with_padding, BBox, Trajectory};
    use crate::trie::{build_trie, select_pivots};
    use crate::zorder::to_reference;
    use rand::{Rng, SeedableRng};

    #[test]
    fn centered_members_have_zero_d_max() {
        let g = running_grid();
        let (data, _) = table2();
        for m in Measure::ALL {
            let refs: Vec<_> = data.iter().map(|t| to_reference(t, &g, m).unwrap()).collect();
            let trie = annotate(build_trie(&refs).unwrap(), &PivotSet::empty(), m, &g, &data).unwrap();
            for (leaf, _) in trie.leaf_paths() {
                assert_eq!(trie.node(leaf).d_max, 0.0, "{m}");
            }
        }
    }

    #[test]
    fn ranges_cover_descendants() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let g = build_grid_with_padding(&BBox::new(0.0, 0.0, 20.0, 20.0), 2.5, 0.001).unwrap();
        let data: Vec<Trajectory> = (0..50)
            .map(|id| {
                let len = rng.random_range(2..7);
                let mut x: f64 = rng.random_range(0.0..20.0);
                let mut y: f64 = rng.random_range(0.0..20.0);
                let pts = (0..len)
                    .map(|_| {
                        x = (x + rng.random_range(-3.0..3.0)).clamp(0.0, 20.0);
                        y = (y + rng.random_range(-3.0..3.0)).clamp(0.0, 20.0);
                        Point::new(x, y)
                    })
                    .collect();
                Trajectory::new(id, pts)
            })
            .collect();
        let data = Dataset::new(data).unwrap();
        for m in [Measure::Hausdorff, Measure::Frechet] {
            let pivots = select_pivots(data.as_slice(), 4, 5, m, 1).unwrap();
            let refs: Vec<_> = data.iter().map(|t| to_reference(t, &g, m).unwrap()).collect();
            let trie = annotate(build_trie(&refs).unwrap(), &pivots, m, &g, &data).unwrap();

            // exhaustive descendant scan from every node
            let leaf_dist: std::collections::HashMap<u32, Vec<f64>> = trie
                .leaf_paths()
                .into_iter()
                .map(|(leaf, path)| {
                    let r: Vec<Point> = path.iter().map(|&z| cell_center(z, &g)).collect();
                    let ds = pivots
                        .pivots
                        .iter()
                        .map(|p| m.distance(&r, &p.points).unwrap())
                        .collect();
                    (leaf, ds)
                })
                .collect();
            for id in 0..trie.node_count() as u32 {
                let node = trie.node(id);
                assert_eq!(node.hr.len(), 4);
                let mut stack = vec![id];
                while let Some(n) = stack.pop() {
                    let nn = trie.node(n);
                    if nn.is_leaf() {
                        for (r, d) in node.hr.iter().zip(&leaf_dist[&n]) {
                            assert!(r.contains(*d));
                        }
                    }
                    stack.extend(nn.children.iter().copied());
                }
                if !node.is_leaf() {
                    for i in 0..4 {
                        let lo = node.children.iter().map(|&c| trie.node(c).hr[i].min).fold(f64::INFINITY, f64::min);
                        let hi = node.children.iter().map(|&c| trie.node(c).hr[i].max).fold(f64::NEG_INFINITY, f64::max);
                        assert_eq!(node.hr[i], PivotRange { min: lo, max: hi });
                    }
                }
            }
            // members never sit further than half a cell diagonal from their reference
            for (leaf, _) in trie.leaf_paths() {
                assert!(trie.node(leaf).d_max <= g.slack + 1e-9);
            }
        }
    }

    #[test]
    fn missing_member_is_an_error() {
        let g = running_grid();
        let (data, q) = table2();
        let r = to_reference(&q, &g, Measure::Frechet).unwrap();
        let trie = build_trie(&[r]).unwrap();
        assert!(annotate(trie, &PivotSet::empty(), Measure::Frechet, &g, &data).is_err());
    }
}
