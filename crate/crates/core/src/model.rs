//! Points, trajectories, the indexing grid and the supported measures.
//!
//! Coordinates are planar: longitude/latitude pairs are used as-is with the
//! Euclidean distance, which is what every lower bound in the index assumes.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::zorder::{self, ZValue};

/// Fraction of the bounding-box side added as padding on every edge.
pub const DEFAULT_PADDING: f64 = 0.001;

/// Finest supported grid: 2^31 cells per axis keeps z-values and the
/// terminator label inside a `u64`.
pub const MAX_GRID_BITS: u32 = 31;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    #[inline]
    pub fn dist(&self, other: &Point) -> f64 {
        euclid(self, other)
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point { x, y }
    }
}

/// Planar Euclidean distance.
#[inline]
pub fn euclid(p: &Point, q: &Point) -> f64 {
    (p.x - q.x).hypot(p.y - q.y)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub id: u64,
    pub points: Vec<Point>,
}

impl Trajectory {
    pub fn new(id: u64, points: Vec<Point>) -> Self {
        Trajectory { id, points }
    }

    pub fn from_coords(id: u64, coords: &[(f64, f64)]) -> Self {
        Trajectory {
            id,
            points: coords.iter().copied().map(Point::from).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// A collection of trajectories with unique ids and O(1) lookup by id.
#[derive(Clone, Debug, Default)]
pub struct Dataset {
    trajectories: Vec<Trajectory>,
    by_id: HashMap<u64, usize>,
}

impl Dataset {
    pub fn new(trajectories: Vec<Trajectory>) -> Result<Self> {
        let mut by_id = HashMap::with_capacity(trajectories.len());
        for (i, t) in trajectories.iter().enumerate() {
            if t.is_empty() {
                return Err(Error::input(format!("trajectory {} has no points", t.id)));
            }
            if let Some(p) = t.points.iter().find(|p| !p.is_finite()) {
                return Err(Error::input(format!(
                    "trajectory {} has a non-finite point ({}, {})",
                    t.id, p.x, p.y
                )));
            }
            if by_id.insert(t.id, i).is_some() {
                return Err(Error::input(format!("duplicate trajectory id {}", t.id)));
            }
        }
        Ok(Dataset {
            trajectories,
            by_id,
        })
    }

    pub fn len(&self) -> usize {
        self.trajectories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trajectories.is_empty()
    }

    pub fn get(&self, id: u64) -> Option<&Trajectory> {
        self.by_id.get(&id).map(|&i| &self.trajectories[i])
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Trajectory> {
        self.trajectories.iter()
    }

    pub fn as_slice(&self) -> &[Trajectory] {
        &self.trajectories
    }

    pub fn into_inner(self) -> Vec<Trajectory> {
        self.trajectories
    }

    pub fn bbox(&self) -> Option<BBox> {
        BBox::of_points(self.trajectories.iter().flat_map(|t| t.points.iter()))
    }
}

impl<'a> IntoIterator for &'a Dataset {
    type Item = &'a Trajectory;
    type IntoIter = std::slice::Iter<'a, Trajectory>;

    fn into_iter(self) -> Self::IntoIter {
        self.trajectories.iter()
    }
}

/// Axis-aligned bounding rectangle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BBox {
    pub min: Point,
    pub max: Point,
}

impl BBox {
    pub fn new(min_x: f64, min_y: f64, max_x: f64, max_y: f64) -> Self {
        BBox {
            min: Point::new(min_x, min_y),
            max: Point::new(max_x, max_y),
        }
    }

    pub fn of_points<'a>(points: impl IntoIterator<Item = &'a Point>) -> Option<BBox> {
        let mut it = points.into_iter();
        let first = *it.next()?;
        let mut bb = BBox {
            min: first,
            max: first,
        };
        for p in it {
            bb.min.x = bb.min.x.min(p.x);
            bb.min.y = bb.min.y.min(p.y);
            bb.max.x = bb.max.x.max(p.x);
            bb.max.y = bb.max.y.max(p.y);
        }
        Some(bb)
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }
}

/// The square indexing region split into `level_l × level_l` cells.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    /// Lower-left corner of the region.
    pub origin: Point,
    pub side_u: f64,
    /// Cells per axis, always `2^bits`.
    pub level_l: u32,
    pub bits: u32,
    /// Effective cell side, `side_u / level_l`.
    pub cell_size: f64,
    /// Half of a cell diagonal; the slack term of every center-based bound.
    pub slack: f64,
}

impl GridConfig {
    /// Rebuilds a grid from its persisted parameters.
    pub fn from_parts(origin: Point, side_u: f64, level_l: u32) -> Result<Self> {
        if !level_l.is_power_of_two() {
            return Err(Error::config(format!(
                "grid level {level_l} is not a power of two"
            )));
        }
        let bits = level_l.trailing_zeros();
        if bits > MAX_GRID_BITS {
            return Err(Error::config(format!("grid level {level_l} is too fine")));
        }
        if !(side_u.is_finite() && side_u > 0.0) || !origin.is_finite() {
            return Err(Error::config(format!(
                "invalid grid region: origin ({}, {}), side {side_u}",
                origin.x, origin.y
            )));
        }
        let cell_size = side_u / f64::from(level_l);
        Ok(GridConfig {
            origin,
            side_u,
            level_l,
            bits,
            cell_size,
            slack: std::f64::consts::SQRT_2 * cell_size / 2.0,
        })
    }

    pub fn cell_count(&self) -> u64 {
        u64::from(self.level_l) * u64::from(self.level_l)
    }

    /// The `(col, row)` cell containing `p`, clamped onto the grid.
    pub fn cell_coords(&self, p: &Point) -> (u32, u32) {
        let max = f64::from(self.level_l - 1);
        let col = ((p.x - self.origin.x) / self.cell_size).floor().clamp(0.0, max);
        let row = ((p.y - self.origin.y) / self.cell_size).floor().clamp(0.0, max);
        (col as u32, row as u32)
    }

    pub fn contains_cell(&self, z: ZValue) -> bool {
        z.0 < self.cell_count()
    }
}

/// Derives the grid for a dataset extent with the default 0.1% padding.
pub fn build_grid(bbox: &BBox, requested_delta: f64) -> Result<GridConfig> {
    build_grid_with_padding(bbox, requested_delta, DEFAULT_PADDING)
}

/// Derives the grid: the square side is the larger bbox extent plus
/// `padding · side` on each edge, and the cell count per axis is the smallest
/// power of two that keeps the cell side at or below `requested_delta`.
pub fn build_grid_with_padding(
    bbox: &BBox,
    requested_delta: f64,
    padding: f64,
) -> Result<GridConfig> {
    if !(requested_delta.is_finite() && requested_delta > 0.0) {
        return Err(Error::config(format!(
            "cell size must be positive, got {requested_delta}"
        )));
    }
    if !(padding.is_finite() && padding >= 0.0) {
        return Err(Error::config(format!("invalid padding {padding}")));
    }
    let mut bb = *bbox;
    if !(bb.min.is_finite() && bb.max.is_finite()) || bb.width() < 0.0 || bb.height() < 0.0 {
        return Err(Error::input("invalid bounding box"));
    }
    if bb.width() == 0.0 {
        bb.min.x -= requested_delta / 2.0;
        bb.max.x += requested_delta / 2.0;
    }
    if bb.height() == 0.0 {
        bb.min.y -= requested_delta / 2.0;
        bb.max.y += requested_delta / 2.0;
    }
    let side = bb.width().max(bb.height());
    let pad = side * padding;
    let side_u = side + 2.0 * pad;
    let origin = Point::new(bb.min.x - pad, bb.min.y - pad);

    let ratio = side_u / requested_delta;
    let mut level: u64 = 1;
    while (level as f64) < ratio {
        level *= 2;
        if level > 1 << MAX_GRID_BITS {
            return Err(Error::config(format!(
                "cell size {requested_delta} needs more than 2^{MAX_GRID_BITS} cells per axis"
            )));
        }
    }
    GridConfig::from_parts(origin, side_u, level as u32)
}

/// Distance from `q` to the closest point of the cell square `z` (zero inside
/// or on the boundary).
pub fn min_dist_point_cell(q: &Point, z: ZValue, grid: &GridConfig) -> Result<f64> {
    if !grid.contains_cell(z) {
        return Err(Error::input(format!(
            "cell {} outside a {}x{} grid",
            z.0, grid.level_l, grid.level_l
        )));
    }
    Ok(point_cell_gap(q, z, grid))
}

#[inline]
pub(crate) fn point_cell_gap(q: &Point, z: ZValue, grid: &GridConfig) -> f64 {
    let (col, row) = zorder::deinterleave(z, grid.bits);
    let x0 = grid.origin.x + f64::from(col) * grid.cell_size;
    let y0 = grid.origin.y + f64::from(row) * grid.cell_size;
    let dx = (x0 - q.x).max(q.x - (x0 + grid.cell_size)).max(0.0);
    let dy = (y0 - q.y).max(q.y - (y0 + grid.cell_size)).max(0.0);
    dx.hypot(dy)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Hausdorff,
    Frechet,
    Dtw,
}

impl Measure {
    pub const ALL: [Measure; 3] = [Measure::Hausdorff, Measure::Frechet, Measure::Dtw];

    /// Metric measures obey the triangle inequality and support pivot pruning.
    pub fn is_metric(self) -> bool {
        !matches!(self, Measure::Dtw)
    }

    /// Order-sensitive measures index the full cell sequence; Hausdorff
    /// indexes a duplicate-free cell set.
    pub fn is_order_sensitive(self) -> bool {
        !matches!(self, Measure::Hausdorff)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Measure::Hausdorff => "hausdorff",
            Measure::Frechet => "frechet",
            Measure::Dtw => "dtw",
        }
    }

    pub(crate) fn to_byte(self) -> u8 {
        match self {
            Measure::Hausdorff => 0,
            Measure::Frechet => 1,
            Measure::Dtw => 2,
        }
    }

    pub(crate) fn from_byte(b: u8) -> Option<Self> {
        match b {
            0 => Some(Measure::Hausdorff),
            1 => Some(Measure::Frechet),
            2 => Some(Measure::Dtw),
            _ => None,
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hausdorff" => Ok(Measure::Hausdorff),
            "frechet" => Ok(Measure::Frechet),
            "dtw" => Ok(Measure::Dtw),
            other => Err(Error::config(format!("unknown measure '{other}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-12;

    fn unpadded(bbox: BBox, delta: f64) -> GridConfig {
        build_grid_with_padding(&bbox, delta, 0.0).unwrap()
    }

    #[test]
    fn running_example_grid() {
        let g = unpadded(BBox::new(0.0, 0.0, 8.0, 8.0), 1.0);
        assert_eq!(g.side_u, 8.0);
        assert_eq!(g.level_l, 8);
        assert_eq!(g.bits, 3);
        assert_eq!(g.cell_size, 1.0);
        assert!((g.slack - std::f64::consts::SQRT_2 / 2.0).abs() < EPS);
    }

    #[test]
    fn coarsest_grid_is_single_cell() {
        let g = unpadded(BBox::new(0.0, 0.0, 8.0, 8.0), 8.0);
        assert_eq!(g.level_l, 1);
        assert_eq!(g.cell_size, 8.0);
    }

    #[test]
    fn level_rounds_up_to_power_of_two() {
        let g = unpadded(BBox::new(0.0, 0.0, 10.0, 10.0), 0.15);
        assert_eq!(g.level_l, 128);
        assert_eq!(g.cell_size, 0.078125);
        assert!(g.cell_size <= 0.15);
    }

    #[test]
    fn padding_and_degenerate_axes() {
        let g = build_grid(&BBox::new(0.0, 0.0, 10.0, 5.0), 1.0).unwrap();
        assert!((g.side_u - 10.02).abs() < EPS);
        assert!((g.origin.x + 0.01).abs() < EPS && (g.origin.y + 0.01).abs() < EPS);
        assert_eq!(g.level_l, 16);

        // all points equal: both axes expand to delta
        let g = unpadded(BBox::new(3.0, 3.0, 3.0, 3.0), 0.5);
        assert_eq!(g.side_u, 0.5);
        assert_eq!(g.level_l, 1);
        assert_eq!(g.origin, Point::new(2.75, 2.75));
    }

    #[test]
    fn rejects_bad_delta() {
        let bb = BBox::new(0.0, 0.0, 1.0, 1.0);
        assert!(matches!(build_grid(&bb, 0.0), Err(Error::Config(_))));
        assert!(matches!(build_grid(&bb, -1.0), Err(Error::Config(_))));
        assert!(matches!(build_grid(&bb, f64::NAN), Err(Error::Config(_))));
    }

    #[test]
    fn grid_is_deterministic() {
        let bb = BBox::new(-3.1, 7.2, 11.9, 9.0);
        let a = build_grid(&bb, 0.37).unwrap();
        let b = build_grid(&bb, 0.37).unwrap();
        assert_eq!(a.origin.x.to_bits(), b.origin.x.to_bits());
        assert_eq!(a.side_u.to_bits(), b.side_u.to_bits());
        assert_eq!(a.cell_size.to_bits(), b.cell_size.to_bits());
        assert_eq!(a.level_l, b.level_l);
    }

    #[test]
    fn euclid_examples() {
        assert_eq!(euclid(&Point::new(0.0, 0.0), &Point::new(3.0, 4.0)), 5.0);
        assert_eq!(euclid(&Point::new(1.5, 0.5), &Point::new(1.5, 0.5)), 0.0);
        let d = euclid(&Point::new(6.5, 4.5), &Point::new(4.5, 6.5));
        assert!((d - 8f64.sqrt()).abs() < EPS);
    }

    #[test]
    fn point_to_cell() {
        let g = unpadded(BBox::new(0.0, 0.0, 8.0, 8.0), 1.0);
        let origin_cell = ZValue(0);
        assert_eq!(min_dist_point_cell(&Point::new(0.3, 0.9), origin_cell, &g).unwrap(), 0.0);
        assert_eq!(min_dist_point_cell(&Point::new(1.0, 1.0), origin_cell, &g).unwrap(), 0.0);
        let d = min_dist_point_cell(&Point::new(3.0, 3.0), origin_cell, &g).unwrap();
        assert!((d - 8f64.sqrt()).abs() < EPS);
        assert_eq!(min_dist_point_cell(&Point::new(0.5, 3.0), origin_cell, &g).unwrap(), 2.0);
        assert!(min_dist_point_cell(&Point::new(0.5, 3.0), ZValue(64), &g).is_err());
    }

    #[test]
    fn measure_flags() {
        assert!(Measure::Hausdorff.is_metric() && Measure::Frechet.is_metric());
        assert!(!Measure::Dtw.is_metric());
        assert!(!Measure::Hausdorff.is_order_sensitive());
        assert_eq!("DTW".parse::<Measure>().unwrap(), Measure::Dtw);
        assert!("lcss".parse::<Measure>().is_err());
    }

    #[test]
    fn dataset_rejects_duplicates_and_empties() {
        let t = |id| Trajectory::from_coords(id, &[(0.0, 0.0), (1.0, 1.0)]);
        assert!(Dataset::new(vec![t(1), t(2)]).is_ok());
        assert!(Dataset::new(vec![t(1), t(1)]).is_err());
        assert!(Dataset::new(vec![Trajectory::new(3, vec![])]).is_err());
        assert!(Dataset::new(vec![Trajectory::from_coords(4, &[(f64::NAN, 0.0)])]).is_err());
    }

    mod props {
        use super::*;
        use crate::zorder::{cell_of, reference_point};
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn center_distance_sandwich(
                qx in -2.0f64..10.0, qy in -2.0f64..10.0,
                px in 0.0f64..8.0, py in 0.0f64..8.0,
            ) {
                let g = unpadded(BBox::new(0.0, 0.0, 8.0, 8.0), 0.7);
                let q = Point::new(qx, qy);
                let z = cell_of(&Point::new(px, py), &g);
                let lo = min_dist_point_cell(&q, z, &g).unwrap();
                let c = euclid(&q, &reference_point(z, &g).unwrap());
                prop_assert!(lo <= c + 1e-12);
                prop_assert!(c <= lo + 2.0 * g.slack + 1e-12);
            }
        }
    }
}
