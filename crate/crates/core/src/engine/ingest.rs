//! Line-oriented trajectory text format: `id<TAB>x1,y1;x2,y2;...`, with
//! `#` comment lines and blank lines ignored.

use std::collections::HashSet;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Dataset, Point, Trajectory};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestOptions {
    /// Trajectories (and chunks) shorter than this are dropped.
    pub min_len: usize,
    /// Longer trajectories are split into chunks of at most this many points.
    pub max_len: usize,
}

impl Default for IngestOptions {
    fn default() -> Self {
        IngestOptions {
            min_len: 10,
            max_len: 1000,
        }
    }
}

impl IngestOptions {
    /// No filtering or splitting; used for query files.
    pub fn keep_all() -> Self {
        IngestOptions {
            min_len: 1,
            max_len: usize::MAX,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestReport {
    pub parsed: usize,
    pub split: usize,
    pub chunks_created: usize,
    pub dropped: usize,
    pub kept: usize,
}

/// Parses the text format; ids must be unique within the input.
pub fn parse_trajectories(text: &str) -> Result<Vec<Trajectory>> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::Parse { line: line_no, msg };
        let (id, body) = line
            .split_once('\t')
            .ok_or_else(|| err("expected `id<TAB>x,y;...`".into()))?;
        let id: u64 = id
            .trim()
            .parse()
            .map_err(|_| err(format!("invalid id `{}`", id.trim())))?;
        let mut points = Vec::new();
        for pair in body.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (x, y) = pair
                .split_once(',')
                .ok_or_else(|| err(format!("invalid point `{pair}`")))?;
            let x: f64 = x.trim().parse().map_err(|_| err(format!("invalid coordinate `{}`", x.trim())))?;
            let y: f64 = y.trim().parse().map_err(|_| err(format!("invalid coordinate `{}`", y.trim())))?;
            if !(x.is_finite() && y.is_finite()) {
                return Err(err(format!("non-finite point `{pair}`")));
            }
            points.push(Point::new(x, y));
        }
        if points.is_empty() {
            return Err(err(format!("trajectory {id} has no points")));
        }
        if !seen.insert(id) {
            return Err(err(format!("duplicate trajectory id {id}")));
        }
        out.push(Trajectory::new(id, points));
    }
    Ok(out)
}

/// Splits long trajectories, then drops short ones. The first chunk keeps the
/// original id; later chunks take fresh ids above the largest input id, in
/// input order.
pub fn preprocess(raw: Vec<Trajectory>, opts: &IngestOptions) -> Result<(Dataset, IngestReport)> {
    if opts.max_len == 0 {
        return Err(Error::config("max_len must be at least 1"));
    }
    let mut report = IngestReport {
        parsed: raw.len(),
        ..IngestReport::default()
    };
    let mut next_id = raw.iter().map(|t| t.id).max().map_or(0, |m| m + 1);
    let mut kept = Vec::with_capacity(raw.len());
    for t in raw {
        let n_chunks = t.points.len().div_ceil(opts.max_len);
        if n_chunks > 1 {
            report.split += 1;
            report.chunks_created += n_chunks - 1;
        }
        for (c, chunk) in t.points.chunks(opts.max_len).enumerate() {
            let id = if c == 0 {
                t.id
            } else {
                next_id += 1;
                next_id - 1
            };
            if chunk.len() < opts.min_len {
                report.dropped += 1;
                continue;
            }
            kept.push(Trajectory::new(id, chunk.to_vec()));
        }
    }
    if kept.is_empty() {
        return Err(Error::input("no trajectories left after preprocessing"));
    }
    report.kept = kept.len();
    Ok((Dataset::new(kept)?, report))
}

/// Reads, parses and preprocesses a trajectory file.
pub fn ingest(path: impl AsRef<Path>, opts: &IngestOptions) -> Result<(Dataset, IngestReport)> {
    let text = fs::read_to_string(path)?;
    preprocess(parse_trajectories(&text)?, opts)
}

/// Writes trajectories in the text format. Coordinates use the shortest
/// representation that parses back to the same value.
pub fn write_trajectories<'a>(
    mut w: impl Write,
    trajectories: impl IntoIterator<Item = &'a Trajectory>,
) -> Result<()> {
    for t in trajectories {
        write!(w, "{}\t", t.id)?;
        for (i, p) in t.points.iter().enumerate() {
            if i > 0 {
                w.write_all(b";")?;
            }
            write!(w, "{:?},{:?}", p.x, p.y)?;
        }
        w.write_all(b"\n")?;
    }
    Ok(())
}
