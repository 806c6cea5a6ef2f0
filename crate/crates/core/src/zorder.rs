//! Z-order (Morton) cell encoding and reference trajectories.
//!
//! Bit layout: for `p` bits per axis the z-value has `2p` bits, read in
//! most-significant pairs first, each pair being `(column bit, row bit)`.
//! Column 010 and row 101 therefore give 011001.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{GridConfig, Measure, Point, Trajectory};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ZValue(pub u64);

impl ZValue {
    /// Renders the value as a `2·bits`-digit binary string.
    pub fn to_binary(self, bits: u32) -> String {
        let width = (2 * bits) as usize;
        if width == 0 {
            return String::new();
        }
        format!("{:0width$b}", self.0, width = width)
    }

    pub fn from_binary(s: &str) -> Option<Self> {
        u64::from_str_radix(s, 2).ok().map(ZValue)
    }

    /// The enclosing cell `drop` levels coarser.
    pub fn coarsen(self, drop: u32) -> Self {
        ZValue(self.0.checked_shr(2 * drop).unwrap_or(0))
    }
}

impl fmt::Display for ZValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[inline]
fn spread(v: u32) -> u64 {
    // 0b abcd -> 0b 0a0b0c0d
    let mut x = u64::from(v);
    x = (x | (x << 16)) & 0x0000_FFFF_0000_FFFF;
    x = (x | (x << 8)) & 0x00FF_00FF_00FF_00FF;
    x = (x | (x << 4)) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | (x << 2)) & 0x3333_3333_3333_3333;
    x = (x | (x << 1)) & 0x5555_5555_5555_5555;
    x
}

#[inline]
fn compact(z: u64) -> u32 {
    let mut x = z & 0x5555_5555_5555_5555;
    x = (x | (x >> 1)) & 0x3333_3333_3333_3333;
    x = (x | (x >> 2)) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | (x >> 4)) & 0x00FF_00FF_00FF_00FF;
    x = (x | (x >> 8)) & 0x0000_FFFF_0000_FFFF;
    x = (x | (x >> 16)) & 0x0000_0000_FFFF_FFFF;
    x as u32
}

/// Interleaves column and row bits, column bit first in every pair.
///
/// The pair order does not depend on `p`: the most significant pair is always
/// bit `p-1` of both coordinates, so `p` only documents the width.
#[inline]
pub fn interleave(col: u32, row: u32, p: u32) -> ZValue {
    debug_assert!(p <= 32 && (p == 32 || (u64::from(col) >> p == 0 && u64::from(row) >> p == 0)));
    ZValue((spread(col) << 1) | spread(row))
}

/// Inverse of [`interleave`].
#[inline]
pub fn deinterleave(z: ZValue, _p: u32) -> (u32, u32) {
    (compact(z.0 >> 1), compact(z.0))
}

/// The cell containing `point`; points outside the region are clamped onto
/// the nearest edge cell.
pub fn cell_of(point: &Point, grid: &GridConfig) -> ZValue {
    let (col, row) = grid.cell_coords(point);
    interleave(col, row, grid.bits)
}

/// Center of cell `z`.
pub fn reference_point(z: ZValue, grid: &GridConfig) -> Result<Point> {
    if !grid.contains_cell(z) {
        return Err(Error::input(format!(
            "cell {} outside a {}x{} grid",
            z.0, grid.level_l, grid.level_l
        )));
    }
    Ok(cell_center(z, grid))
}

#[inline]
pub(crate) fn cell_center(z: ZValue, grid: &GridConfig) -> Point {
    let (col, row) = deinterleave(z, grid.bits);
    Point::new(
        grid.origin.x + (f64::from(col) + 0.5) * grid.cell_size,
        grid.origin.y + (f64::from(row) + 0.5) * grid.cell_size,
    )
}

/// How a reference trajectory stores its cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RefForm {
    /// One cell per sample point, order and duplicates kept.
    Sequence,
    /// Duplicate-free cells in ascending z-value order.
    Set,
}

impl RefForm {
    pub fn for_measure(measure: Measure) -> Self {
        if measure.is_order_sensitive() {
            RefForm::Sequence
        } else {
            RefForm::Set
        }
    }
}

/// A trajectory snapped to the centers of the cells it visits.
#[derive(Clone, Debug, PartialEq)]
pub struct ReferenceTrajectory {
    pub source_id: u64,
    pub form: RefForm,
    pub zvals: Vec<ZValue>,
    pub ref_points: Vec<Point>,
}

impl ReferenceTrajectory {
    pub fn len(&self) -> usize {
        self.zvals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zvals.is_empty()
    }
}

pub fn to_reference(
    traj: &Trajectory,
    grid: &GridConfig,
    measure: Measure,
) -> Result<ReferenceTrajectory> {
    if traj.is_empty() {
        return Err(Error::input(format!("trajectory {} has no points", traj.id)));
    }
    let form = RefForm::for_measure(measure);
    let cells = traj.points.iter().map(|p| cell_of(p, grid));
    let zvals: Vec<ZValue> = match form {
        RefForm::Sequence => cells.collect(),
        RefForm::Set => cells.collect::<BTreeSet<_>>().into_iter().collect(),
    };
    let ref_points = zvals.iter().map(|&z| cell_center(z, grid)).collect();
    Ok(ReferenceTrajectory {
        source_id: traj.id,
        form,
        zvals,
        ref_points,
    })
}
