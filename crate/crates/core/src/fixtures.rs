//! Small hand-checkable datasets: the five-trajectory running example on an
//! 8×8 grid over `[0,8]²`, and an eight-set z-value collection on a 4×4 grid
//! used to exercise the greedy trie builder.

use crate::model::{build_grid_with_padding, BBox, Dataset, GridConfig, Trajectory};
use crate::zorder::ZValue;

/// Unpadded 8×8 grid with unit cells over `[0,8]²`.
pub fn running_grid() -> GridConfig {
    build_grid_with_padding(&BBox::new(0.0, 0.0, 8.0, 8.0), 1.0, 0.0)
        .expect("static grid parameters are valid")
}

/// The running-example dataset (ids 1..=5) and its query trajectory (id 0).
pub fn table2() -> (Dataset, Trajectory) {
    let data = vec![
        Trajectory::from_coords(1, &[(0.5, 7.5), (2.5, 7.5), (6.5, 7.5), (6.5, 4.5)]),
        Trajectory::from_coords(2, &[(1.5, 0.5), (2.5, 0.5), (2.5, 4.5), (4.5, 4.5)]),
        Trajectory::from_coords(
            3,
            &[(4.5, 0.5), (7.5, 0.5), (7.5, 2.5), (4.5, 2.5), (4.5, 1.5)],
        ),
        Trajectory::from_coords(4, &[(0.5, 7.5), (2.5, 7.5), (5.5, 7.5), (5.5, 3.5)]),
        Trajectory::from_coords(
            5,
            &[(1.5, 0.5), (2.5, 0.5), (2.5, 5.5), (0.5, 5.5), (0.5, 2.5)],
        ),
    ];
    let query = Trajectory::from_coords(0, &[(0.5, 6.5), (2.5, 6.5), (4.5, 6.5)]);
    (Dataset::new(data).expect("fixture ids are unique"), query)
}

/// Unpadded 4×4 grid with unit cells over `[0,4]²`.
pub fn small_grid() -> GridConfig {
    build_grid_with_padding(&BBox::new(0.0, 0.0, 4.0, 4.0), 1.0, 0.0)
        .expect("static grid parameters are valid")
}

/// Eight z-value sets over cells 0001..0110, keyed by ids 1..=8.
pub fn greedy_collection() -> Vec<(u64, Vec<ZValue>)> {
    let sets: [&[u64]; 8] = [
        &[1, 3],
        &[1, 3, 5],
        &[2, 3],
        &[2, 3, 5],
        &[3, 5],
        &[1, 4],
        &[2, 4],
        &[5, 6],
    ];
    sets.iter()
        .enumerate()
        .map(|(i, s)| (i as u64 + 1, s.iter().map(|&v| ZValue(v)).collect()))
        .collect()
}
