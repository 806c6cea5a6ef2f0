//! Exact trajectory distances and the incremental per-column states the trie
//! search keeps for each path prefix.
//!
//! A state describes the distance matrix between the query (rows) and the
//! reference points consumed so far (columns). Appending one reference point
//! costs `O(m)` for a query of length `m`.

use crate::error::{Error, Result};
use crate::model::{point_cell_gap, GridConfig, Measure, Point};
use crate::zorder::ZValue;

fn check_nonempty(a: &[Point], b: &[Point]) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::input("distance between an empty trajectory"));
    }
    Ok(())
}

/// Hausdorff distance: the larger of the two directed max-min distances.
pub fn hausdorff(a: &[Point], b: &[Point]) -> Result<f64> {
    check_nonempty(a, b)?;
    Ok(hausdorff_unchecked(a, b))
}

/// Discrete Frechet distance by full dynamic programming.
pub fn frechet(a: &[Point], b: &[Point]) -> Result<f64> {
    check_nonempty(a, b)?;
    Ok(frechet_unchecked(a, b))
}

/// Dynamic time warping with Euclidean ground cost.
pub fn dtw(a: &[Point], b: &[Point]) -> Result<f64> {
    check_nonempty(a, b)?;
    Ok(dtw_unchecked(a, b))
}

impl Measure {
    /// Distance between two non-empty point sequences under this measure.
    pub fn distance(self, a: &[Point], b: &[Point]) -> Result<f64> {
        check_nonempty(a, b)?;
        Ok(self.distance_unchecked(a, b))
    }

    #[inline]
    pub(crate) fn distance_unchecked(self, a: &[Point], b: &[Point]) -> f64 {
        debug_assert!(!a.is_empty() && !b.is_empty());
        match self {
            Measure::Hausdorff => hausdorff_unchecked(a, b),
            Measure::Frechet => frechet_unchecked(a, b),
            Measure::Dtw => dtw_unchecked(a, b),
        }
    }
}

pub(crate) fn hausdorff_unchecked(a: &[Point], b: &[Point]) -> f64 {
    let mut col_min = vec![f64::INFINITY; b.len()];
    let mut row_max = 0.0f64;
    for p in a {
        let mut row_min = f64::INFINITY;
        for (j, q) in b.iter().enumerate() {
            let d = p.dist(q);
            row_min = row_min.min(d);
            col_min[j] = col_min[j].min(d);
        }
        row_max = row_max.max(row_min);
    }
    col_min.into_iter().fold(row_max, f64::max)
}

pub(crate) fn frechet_unchecked(a: &[Point], b: &[Point]) -> f64 {
    // one column per point of `b`, rows follow `a`
    let mut col: Vec<f64> = Vec::with_capacity(a.len());
    let mut acc = 0.0f64;
    for p in a {
        acc = acc.max(p.dist(&b[0]));
        col.push(acc);
    }
    for q in &b[1..] {
        let mut diag = col[0];
        col[0] = col[0].max(a[0].dist(q));
        for i in 1..a.len() {
            let left = col[i];
            col[i] = a[i].dist(q).max(diag.min(left).min(col[i - 1]));
            diag = left;
        }
    }
    col[a.len() - 1]
}

pub(crate) fn dtw_unchecked(a: &[Point], b: &[Point]) -> f64 {
    let mut col: Vec<f64> = Vec::with_capacity(a.len());
    let mut acc = 0.0f64;
    for p in a {
        acc += p.dist(&b[0]);
        col.push(acc);
    }
    for q in &b[1..] {
        let mut diag = col[0];
        col[0] += a[0].dist(q);
        for i in 1..a.len() {
            let left = col[i];
            col[i] = a[i].dist(q) + diag.min(left).min(col[i - 1]);
            diag = left;
        }
    }
    col[a.len() - 1]
}

/// Result of appending one reference point to a state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Step {
    /// One-side bound valid for every trajectory below the extended prefix.
    pub lb_o: f64,
    /// Distance between the query and the extended prefix itself; the
    /// numerator of the two-side bound once the prefix is complete.
    pub full: f64,
}

/// Running row minima and maximum column minimum of the Hausdorff matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct HausdorffState {
    r: Vec<f64>,
    c_max: f64,
    len: usize,
}

impl HausdorffState {
    pub fn new(query_len: usize) -> Self {
        HausdorffState {
            r: vec![f64::INFINITY; query_len],
            c_max: 0.0,
            len: 0,
        }
    }

    pub fn rows(&self) -> &[f64] {
        &self.r
    }

    pub fn c_max(&self) -> f64 {
        self.c_max
    }

    /// Number of reference points consumed.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn lb_o(&self, slack: f64) -> f64 {
        (self.c_max - slack).max(0.0)
    }

    /// Hausdorff distance between the query and the consumed prefix.
    pub fn full(&self) -> f64 {
        if self.len == 0 {
            return f64::INFINITY;
        }
        self.r.iter().copied().fold(self.c_max, f64::max)
    }

    pub fn extend(&mut self, query: &[Point], p: &Point, slack: f64) -> Step {
        debug_assert_eq!(query.len(), self.r.len());
        let mut r_max = 0.0f64;
        let mut c = f64::INFINITY;
        for (ri, q) in self.r.iter_mut().zip(query) {
            let d = q.dist(p);
            *ri = ri.min(d);
            c = c.min(d);
            r_max = r_max.max(*ri);
        }
        self.c_max = self.c_max.max(c);
        self.len += 1;
        Step {
            lb_o: self.lb_o(slack),
            full: r_max.max(self.c_max),
        }
    }
}

/// Last column of the Frechet or DTW matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderedDpState {
    col: Vec<f64>,
    c_min: f64,
    len: usize,
}

impl OrderedDpState {
    pub fn new(query_len: usize) -> Self {
        OrderedDpState {
            col: vec![0.0; query_len],
            c_min: 0.0,
            len: 0,
        }
    }

    pub fn column(&self) -> &[f64] {
        &self.col
    }

    pub fn c_min(&self) -> f64 {
        self.c_min
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `f[m][n]`: distance between the whole query and the consumed prefix.
    pub fn full(&self) -> f64 {
        match self.col.last() {
            Some(&v) if self.len > 0 => v,
            _ => f64::INFINITY,
        }
    }

    /// Appends `p` as a new Frechet column.
    pub fn extend_frechet(&mut self, query: &[Point], p: &Point, slack: f64) -> Step {
        self.push_column(query, |q| q.dist(p), f64::max);
        Step {
            lb_o: (self.c_min - slack).max(0.0),
            full: self.full(),
        }
    }

    /// Appends a DTW column whose ground cost is the distance from each query
    /// point to the square of `cell`, never more than the distance to any
    /// sample inside the cell.
    pub fn extend_dtw(&mut self, query: &[Point], cell: ZValue, grid: &GridConfig) -> Step {
        self.push_column(query, |q| point_cell_gap(q, cell, grid), |d, prev| d + prev);
        Step {
            lb_o: self.c_min,
            full: self.full(),
        }
    }

    #[inline]
    fn push_column(
        &mut self,
        query: &[Point],
        cost: impl Fn(&Point) -> f64,
        combine: impl Fn(f64, f64) -> f64,
    ) {
        debug_assert_eq!(query.len(), self.col.len());
        let m = query.len();
        if m == 0 {
            self.len += 1;
            return;
        }
        if self.len == 0 {
            // first column: only vertical moves are possible
            let mut acc = cost(&query[0]);
            self.col[0] = acc;
            for i in 1..m {
                acc = combine(cost(&query[i]), acc);
                self.col[i] = acc;
            }
        } else {
            let mut diag = self.col[0];
            self.col[0] = combine(cost(&query[0]), self.col[0]);
            for i in 1..m {
                let left = self.col[i];
                self.col[i] = combine(cost(&query[i]), diag.min(left).min(self.col[i - 1]));
                diag = left;
            }
        }
        self.c_min = self.col.iter().copied().fold(f64::INFINITY, f64::min);
        self.len += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{running_grid, table2};
    use crate::model::{BBox, build_grid_with_padding, Trajectory};
    use crate::zorder::{cell_center, cell_of, to_reference};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const TOL: f64 = 1e-9;

    // Independent full-matrix oracles: every cell of the matrix is
    // materialised and filled straight from the recurrences.
    fn matrix(a: &[Point], b: &[Point], d: impl Fn(&Point, &Point) -> f64) -> Vec<Vec<f64>> {
        a.iter().map(|p| b.iter().map(|q| d(p, q)).collect()).collect()
    }

    fn hausdorff_oracle(a: &[Point], b: &[Point]) -> f64 {
        let m = matrix(a, b, |p, q| ((p.x - q.x).powi(2) + (p.y - q.y).powi(2)).sqrt());
        let fwd = m
            .iter()
            .map(|row| row.iter().cloned().fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max);
        let bwd = (0..b.len())
            .map(|j| m.iter().map(|row| row[j]).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max);
        fwd.max(bwd)
    }

    fn dp_oracle(
        a: &[Point],
        b: &[Point],
        d: impl Fn(usize, usize) -> f64,
        dtw: bool,
    ) -> Vec<Vec<f64>> {
        let (m, n) = (a.len(), b.len());
        let mut f = vec![vec![0.0f64; n]; m];
        for i in 0..m {
            for j in 0..n {
                let c = d(i, j);
                let prev = match (i, j) {
                    (0, 0) => None,
                    (0, _) => Some(f[0][j - 1]),
                    (_, 0) => Some(f[i - 1][0]),
                    _ => Some(f[i - 1][j - 1].min(f[i - 1][j]).min(f[i][j - 1])),
                };
                f[i][j] = match (prev, dtw) {
                    (None, _) => c,
                    (Some(p), true) => c + p,
                    (Some(p), false) => c.max(p),
                };
            }
        }
        f
    }

    fn frechet_oracle(a: &[Point], b: &[Point]) -> f64 {
        let f = dp_oracle(a, b, |i, j| a[i].dist(&b[j]), false);
        f[a.len() - 1][b.len() - 1]
    }

    fn dtw_oracle(a: &[Point], b: &[Point]) -> f64 {
        let f = dp_oracle(a, b, |i, j| a[i].dist(&b[j]), true);
        f[a.len() - 1][b.len() - 1]
    }

    fn random_traj(rng: &mut ChaCha8Rng, id: u64, len: usize, span: f64) -> Trajectory {
        let pts = (0..len)
            .map(|_| Point::new(rng.random_range(0.0..span), rng.random_range(0.0..span)))
            .collect();
        Trajectory::new(id, pts)
    }

    #[test]
    fn running_example_hausdorff() {
        let (data, q) = table2();
        let expect = [2.83, 6.08, 6.71, 3.16, 6.08];
        for (id, e) in (1..=5).zip(expect) {
            let d = hausdorff(&q.points, &data.get(id).unwrap().points).unwrap();
            assert!((d - e).abs() < 0.01, "tau{id}: {d}");
        }
        let t1 = &data.get(1).unwrap().points;
        assert_eq!(hausdorff(t1, t1).unwrap(), 0.0);
    }

    #[test]
    fn running_example_frechet() {
        let (data, q) = table2();
        let t1 = &data.get(1).unwrap().points;
        let t3 = &data.get(3).unwrap().points;
        assert_eq!(frechet(t1, t1).unwrap(), 0.0);
        // single query point: max over the other trajectory
        let single = frechet(&q.points[..1], t3).unwrap();
        let expect = t3.iter().map(|p| p.dist(&q.points[0])).fold(0.0, f64::max);
        assert!((single - expect).abs() < TOL);
        assert!((single - 9.219544457292887).abs() < TOL);
        // frozen from the full-matrix oracle
        let v = frechet(&q.points, t1).unwrap();
        assert!((v - 2.8284271247461903).abs() < TOL);
        assert!((v - frechet_oracle(&q.points, t1)).abs() < TOL);
    }

    #[test]
    fn running_example_dtw() {
        let (data, q) = table2();
        let t3 = &data.get(3).unwrap().points;
        let t4 = &data.get(4).unwrap().points;
        assert_eq!(dtw(t4, t4).unwrap(), 0.0);
        let single = dtw(&q.points[..1], t3).unwrap();
        let expect: f64 = t3.iter().map(|p| p.dist(&q.points[0])).sum();
        assert!((single - expect).abs() < TOL);
        assert!((single - 36.55288324344464).abs() < TOL);
        let v = dtw(&q.points, t4).unwrap();
        assert!((v - 6.576491222541474).abs() < TOL);
        assert!((v - dtw_oracle(&q.points, t4)).abs() < TOL);
    }

    #[test]
    fn empty_inputs_are_rejected() {
        let p = [Point::new(0.0, 0.0)];
        assert!(hausdorff(&[], &p).is_err());
        assert!(frechet(&p, &[]).is_err());
        assert!(dtw(&[], &[]).is_err());
        assert!(Measure::Dtw.distance(&[], &p).is_err());
    }

    #[test]
    fn exact_distances_match_oracles() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let m = rng.random_range(1..12);
            let n = rng.random_range(1..12);
            let a = random_traj(&mut rng, 0, m, 10.0);
            let b = random_traj(&mut rng, 1, n, 10.0);
            let (a, b) = (&a.points, &b.points);
            assert!((hausdorff(a, b).unwrap() - hausdorff_oracle(a, b)).abs() < TOL);
            assert!((frechet(a, b).unwrap() - frechet_oracle(a, b)).abs() < TOL);
            assert!((dtw(a, b).unwrap() - dtw_oracle(a, b)).abs() < TOL);
        }
    }

    #[test]
    fn symmetry_and_triangle_inequality() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let t: Vec<Trajectory> = (0..3)
                .map(|i| {
                    let len = rng.random_range(1..9);
                    random_traj(&mut rng, i, len, 20.0)
                })
                .collect();
            let (a, b, c) = (&t[0].points, &t[1].points, &t[2].points);
            for m in [Measure::Hausdorff, Measure::Frechet] {
                let ab = m.distance(a, b).unwrap();
                let ba = m.distance(b, a).unwrap();
                let bc = m.distance(b, c).unwrap();
                let ac = m.distance(a, c).unwrap();
                assert!((ab - ba).abs() < TOL);
                assert!(ac <= ab + bc + TOL, "{m}: {ac} > {ab} + {bc}");
                assert!(ab >= 0.0);
            }
            assert!(dtw(a, b).unwrap() >= 0.0);
            assert_eq!(dtw(a, a).unwrap(), 0.0);
        }
    }

    #[test]
    fn hausdorff_state_on_running_example() {
        let g = running_grid();
        let (data, q) = table2();
        let r1 = to_reference(data.get(1).unwrap(), &g, Measure::Hausdorff).unwrap();
        let mut st = HausdorffState::new(q.len());
        assert_eq!(st.lb_o(g.slack), 0.0);
        assert!(st.rows().iter().all(|r| r.is_infinite()));
        let mut last = None;
        for p in &r1.ref_points {
            last = Some(st.extend(&q.points, p, g.slack));
        }
        let step = last.unwrap();
        assert!((step.full - 8f64.sqrt()).abs() < TOL);
        assert!((step.lb_o - (8f64.sqrt() - 0.5f64.sqrt())).abs() < TOL);
        assert!((step.lb_o - 2.1213).abs() < 1e-4);
    }

    #[test]
    fn dp_state_first_column() {
        let g = running_grid();
        let (_, q) = table2();
        let p = Point::new(6.5, 0.5);
        let mut f = OrderedDpState::new(q.len());
        f.extend_frechet(&q.points, &p, g.slack);
        let mut acc = 0.0f64;
        for (i, qi) in q.points.iter().enumerate() {
            acc = acc.max(qi.dist(&p));
            assert_eq!(f.column()[i], acc);
        }

        // single-cell DTW reference: prefix sums of point-to-cell gaps
        let cell = cell_of(&p, &g);
        let mut w = OrderedDpState::new(q.len());
        w.extend_dtw(&q.points, cell, &g);
        let mut acc = 0.0;
        for (i, qi) in q.points.iter().enumerate() {
            acc += point_cell_gap(qi, cell, &g);
            assert!((w.column()[i] - acc).abs() < TOL);
        }

        // query inside every cell of the reference
        let inside = [Point::new(2.2, 2.7), Point::new(2.9, 2.1)];
        let mut w = OrderedDpState::new(2);
        let step = w.extend_dtw(&inside, cell_of(&Point::new(2.5, 2.5), &g), &g);
        assert_eq!(step.lb_o, 0.0);
        assert_eq!(step.full, 0.0);
    }

    /// Replays a reference sequence through a fresh state and compares every
    /// prefix with the batch recurrences.
    fn check_incremental(rng: &mut ChaCha8Rng) {
        let g = build_grid_with_padding(&BBox::new(0.0, 0.0, 16.0, 16.0), 0.9, 0.001).unwrap();
        let m = rng.random_range(1..10);
        let n = rng.random_range(1..14);
        let q = random_traj(rng, 0, m, 16.0).points;
        let t = random_traj(rng, 1, n, 16.0);
        let cells: Vec<ZValue> = t.points.iter().map(|p| cell_of(p, &g)).collect();
        let centers: Vec<Point> = cells.iter().map(|&z| cell_center(z, &g)).collect();

        let mut h = HausdorffState::new(m);
        let mut f = OrderedDpState::new(m);
        let mut w = OrderedDpState::new(m);
        let mut prev = (0.0, 0.0, 0.0);
        for j in 0..n {
            let sh = h.extend(&q, &centers[j], g.slack);
            let sf = f.extend_frechet(&q, &centers[j], g.slack);
            let sw = w.extend_dtw(&q, cells[j], &g);
            let prefix = &centers[..=j];

            // Hausdorff: row minima, column maxima of minima
            for (i, qi) in q.iter().enumerate() {
                let r = prefix.iter().map(|p| qi.dist(p)).fold(f64::INFINITY, f64::min);
                assert!((h.rows()[i] - r).abs() < TOL);
            }
            let cmax = prefix
                .iter()
                .map(|p| q.iter().map(|qi| qi.dist(p)).fold(f64::INFINITY, f64::min))
                .fold(0.0, f64::max);
            assert!((h.c_max() - cmax).abs() < TOL);
            assert!((sh.full - hausdorff_oracle(&q, prefix)).abs() < TOL);
            assert!((sh.lb_o - (cmax - g.slack).max(0.0)).abs() < TOL);

            let ff = dp_oracle(&q, prefix, |i, jj| q[i].dist(&prefix[jj]), false);
            for i in 0..m {
                assert!((f.column()[i] - ff[i][j]).abs() < TOL);
            }
            assert!((sf.full - frechet_oracle(&q, prefix)).abs() < TOL);

            let wf = dp_oracle(&q, prefix, |i, jj| point_cell_gap(&q[i], cells[jj], &g), true);
            for i in 0..m {
                assert!((w.column()[i] - wf[i][j]).abs() < TOL);
            }

            // one-side bounds never shrink as the prefix grows
            assert!(sh.lb_o >= prev.0 && sf.lb_o >= prev.1 && sw.lb_o >= prev.2);
            prev = (sh.lb_o, sf.lb_o, sw.lb_o);
        }

        // soundness against the trajectory the reference was built from
        let dh = hausdorff(&q, &t.points).unwrap();
        let df = frechet(&q, &t.points).unwrap();
        let dw = dtw(&q, &t.points).unwrap();
        assert!(h.lb_o(g.slack) <= dh + TOL);
        assert!(f.c_min() - g.slack <= df + TOL);
        assert!((f.full() - g.slack).max(0.0) <= df + TOL);
        assert!(w.c_min() <= dw + TOL && w.full() <= dw + TOL);
    }

    #[test]
    fn incremental_states_match_batch() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            check_incremental(&mut rng);
        }
    }

    proptest! {
        #[test]
        fn dtw_cell_bound_is_sound(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = build_grid_with_padding(&BBox::new(0.0, 0.0, 10.0, 10.0), 1.3, 0.001).unwrap();
            let ql = rng.random_range(1..8);
            let q = random_traj(&mut rng, 0, ql, 10.0).points;
            let tl = rng.random_range(1..8);
            let t = random_traj(&mut rng, 1, tl, 10.0);
            let r = to_reference(&t, &g, Measure::Dtw).unwrap();
            let mut w = OrderedDpState::new(q.len());
            for &z in &r.zvals {
                w.extend_dtw(&q, z, &g);
            }
            let d = dtw(&q, &t.points).unwrap();
            prop_assert!(w.c_min() <= d + TOL);
            prop_assert!(w.full() <= d + TOL);
        }
    }
}
