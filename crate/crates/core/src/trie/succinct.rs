//! Compact persisted form of an annotated trie.
//!
//! The upper `dense_levels` levels are stored as two bitmaps per node, each
//! with one bit per grid cell plus a final bit for the `End` label: `b_c`
//! marks which labels exist as children, `b_l` marks which of those children
//! are internal. Node bitmaps are concatenated in breadth-first order, so
//! the child behind set bit `pos` of `b_c` is node number `1 + rank1(pos)`.
//!
//! Everything else goes into `sparse_bytes`: first the annotations (pivot
//! ranges, and leaf payloads) of every dense-level node in breadth-first
//! order, then one length-prefixed pre-order record per subtree rooted at
//! depth `dense_levels`.
//!
//! Payload layout, all integers little-endian:
//!
//! ```text
//! "RPTT" | version u16 | origin.x f64 | origin.y f64 | side_u f64 | level_l u32
//! | measure u8 | n_pivots u8 | dense_levels u8
//! | n_pivots × (id u64, n u32, n × (x f64, y f64))
//! | b_c: bits u64, ceil(bits/64) × u64 | b_l: same | sparse: len u64, bytes
//! ```

use std::collections::VecDeque;

use super::{Label, NodeId, PivotRange, PivotSet, RpTrie, TrieNode};
use crate::codec::{Reader, Writer};
use crate::error::{Error, Result};
use crate::model::{GridConfig, Measure, Point};
use crate::zorder::{RefForm, ZValue};

pub const PAYLOAD_MAGIC: &[u8; 4] = b"RPTT";
pub const PAYLOAD_VERSION: u16 = 1;
pub const DEFAULT_DENSE_LEVELS: u8 = 2;

const ROOT_CODE: u64 = u64::MAX;

/// Plain bit vector with a per-word cumulative rank directory.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BitVec {
    words: Vec<u64>,
    len: u64,
    ranks: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: u64) -> Self {
        BitVec {
            words: vec![0; len.div_ceil(64) as usize],
            len,
            ranks: Vec::new(),
        }
    }

    fn from_words(words: Vec<u64>, len: u64) -> Self {
        let mut bv = BitVec {
            words,
            len,
            ranks: Vec::new(),
        };
        bv.build_rank();
        bv
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn set(&mut self, pos: u64) {
        debug_assert!(pos < self.len);
        self.words[(pos / 64) as usize] |= 1 << (pos % 64);
    }

    pub fn get(&self, pos: u64) -> bool {
        pos < self.len && self.words[(pos / 64) as usize] >> (pos % 64) & 1 == 1
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    /// Number of set bits strictly before `pos`.
    pub fn rank1(&self, pos: u64) -> u64 {
        debug_assert_eq!(self.ranks.len(), self.words.len(), "rank directory not built");
        let w = (pos / 64) as usize;
        if w >= self.words.len() {
            return self.count_ones();
        }
        let mask = (1u64 << (pos % 64)) - 1;
        self.ranks[w] + u64::from((self.words[w] & mask).count_ones())
    }

    /// Set positions in `[start, end)`, ascending.
    pub fn ones_in(&self, start: u64, end: u64) -> impl Iterator<Item = u64> + '_ {
        let first = (start / 64) as usize;
        let last = end.div_ceil(64) as usize;
        (first..last.min(self.words.len())).flat_map(move |w| {
            let mut word = self.words[w];
            std::iter::from_fn(move || {
                while word != 0 {
                    let bit = u64::from(word.trailing_zeros());
                    word &= word - 1;
                    let pos = w as u64 * 64 + bit;
                    if pos >= start && pos < end {
                        return Some(pos);
                    }
                }
                None
            })
        })
    }

    pub(crate) fn build_rank(&mut self) {
        let mut acc = 0u64;
        self.ranks = self
            .words
            .iter()
            .map(|w| {
                let r = acc;
                acc += u64::from(w.count_ones());
                r
            })
            .collect();
    }

    fn write(&self, w: &mut Writer) {
        w.u64(self.len);
        for &word in &self.words {
            w.u64(word);
        }
    }

    fn read(r: &mut Reader<'_>) -> Result<Self> {
        let at = r.offset();
        let len = r.u64()?;
        let n_words = len.div_ceil(64);
        if n_words.saturating_mul(8) > r.remaining() as u64 {
            return Err(Error::format("bitmap", at, format!("bit length {len} exceeds input")));
        }
        let words = (0..n_words).map(|_| r.u64()).collect::<Result<Vec<_>>>()?;
        if len % 64 != 0 {
            if let Some(&last) = words.last() {
                if last >> (len % 64) != 0 {
                    return Err(Error::format("bitmap", at, "bits set past the end"));
                }
            }
        }
        Ok(BitVec::from_words(words, len))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuccinctLevels {
    pub dense_levels: u8,
    /// Bits per dense node: one per grid cell plus the `End` slot.
    pub bits_per_node: u64,
    pub b_c: BitVec,
    pub b_l: BitVec,
    pub sparse_bytes: Vec<u8>,
    pub form: RefForm,
    pub n_pivots: usize,
}

impl SuccinctLevels {
    /// Number of child links recorded in the dense bitmaps.
    pub fn dense_links(&self) -> u64 {
        self.b_c.count_ones()
    }
}

fn label_code(label: Label, end_code: u64) -> u64 {
    match label {
        Label::Root => ROOT_CODE,
        Label::Cell(z) => z.0,
        Label::End => end_code,
    }
}

fn write_annotation(w: &mut Writer, node: &TrieNode, n_pivots: usize) -> Result<()> {
    if node.hr.len() != n_pivots {
        return Err(Error::input(format!(
            "node has {} pivot ranges, expected {n_pivots}",
            node.hr.len()
        )));
    }
    for r in &node.hr {
        w.f64(r.min);
        w.f64(r.max);
    }
    if node.is_leaf() {
        w.f64(node.d_max);
        w.u64(node.tids.len() as u64);
        for &t in &node.tids {
            w.u64(t);
        }
    }
    Ok(())
}

fn read_annotation(r: &mut Reader<'_>, node: &mut TrieNode, n_pivots: usize, leaf: bool) -> Result<()> {
    node.hr = (0..n_pivots)
        .map(|_| {
            Ok(PivotRange {
                min: r.f64()?,
                max: r.f64()?,
            })
        })
        .collect::<Result<_>>()?;
    if leaf {
        node.d_max = r.f64()?;
        let n = r.count(8)?;
        node.tids = (0..n).map(|_| r.u64()).collect::<Result<_>>()?;
    }
    Ok(())
}

pub fn encode_succinct(trie: &RpTrie, grid: &GridConfig, dense_levels: u8) -> Result<SuccinctLevels> {
    let end_code = grid.cell_count();
    let bits_per_node = end_code + 1;
    let n_pivots = trie.pivot_count();
    let depth = trie.depths();
    let dense: Vec<NodeId> = (0..trie.node_count() as NodeId)
        .filter(|&i| depth[i as usize] < u32::from(dense_levels))
        .collect();

    let total_bits = (dense.len() as u64)
        .checked_mul(bits_per_node)
        .ok_or_else(|| Error::config("dense bitmap size overflows"))?;
    let mut b_c = BitVec::zeros(total_bits);
    let mut b_l = BitVec::zeros(total_bits);
    let mut w = Writer::new();

    // canonical order is breadth-first, so dense nodes are a prefix
    for (k, &id) in dense.iter().enumerate() {
        debug_assert_eq!(k, id as usize);
        let node = trie.node(id);
        let base = k as u64 * bits_per_node;
        for &c in &node.children {
            let child = trie.node(c);
            let pos = base + label_code(child.label, end_code);
            b_c.set(pos);
            if !child.is_leaf() {
                b_l.set(pos);
            }
        }
        write_annotation(&mut w, node, n_pivots)?;
    }

    let frontier: Vec<NodeId> = (0..trie.node_count() as NodeId)
        .filter(|&i| depth[i as usize] == u32::from(dense_levels))
        .collect();
    for &f in &frontier {
        let mut rec = Writer::new();
        let mut stack = vec![f];
        while let Some(id) = stack.pop() {
            let node = trie.node(id);
            rec.u64(label_code(node.label, end_code));
            rec.u32(node.children.len() as u32);
            write_annotation(&mut rec, node, n_pivots)?;
            stack.extend(node.children.iter().rev().copied());
        }
        w.block(&rec.into_inner());
    }

    b_c.build_rank();
    b_l.build_rank();
    Ok(SuccinctLevels {
        dense_levels,
        bits_per_node,
        b_c,
        b_l,
        sparse_bytes: w.into_inner(),
        form: trie.form(),
        n_pivots,
    })
}

fn decode_label(code: u64, end_code: u64, r: &Reader<'_>) -> Result<Label> {
    match code {
        ROOT_CODE => Ok(Label::Root),
        c if c == end_code => Ok(Label::End),
        c if c < end_code => Ok(Label::Cell(ZValue(c))),
        c => Err(r.error(format!("label {c} outside the grid"))),
    }
}

pub fn decode_succinct(levels: &SuccinctLevels) -> Result<RpTrie> {
    let bpn = levels.bits_per_node;
    if bpn == 0 || levels.b_c.len() != levels.b_l.len() || !levels.b_c.len().is_multiple_of(bpn) {
        return Err(Error::format("bitmap", 0, "bitmap sizes disagree with the grid"));
    }
    let end_code = bpn - 1;
    let n_dense = levels.b_c.len() / bpn;
    let dense_levels = u32::from(levels.dense_levels);
    let mut sparse = Reader::new(&levels.sparse_bytes, "sparse");

    let mut nodes: Vec<TrieNode> = Vec::new();
    let mut frontier: Vec<(usize, bool)> = Vec::new();

    if dense_levels == 0 {
        if n_dense != 0 {
            return Err(Error::format("bitmap", 0, "bitmaps present with zero dense levels"));
        }
        frontier.push((usize::MAX, true));
    } else {
        if n_dense == 0 {
            return Err(Error::format("bitmap", 0, "missing root bitmap"));
        }
        nodes.push(TrieNode::new(Label::Root));
        // (node number, arena index, depth)
        let mut queue: VecDeque<(u64, usize, u32)> = VecDeque::from([(0, 0, 0)]);
        let mut next_number = 1u64;
        while let Some((number, idx, depth)) = queue.pop_front() {
            if number >= n_dense {
                return Err(Error::format("bitmap", 0, format!("node {number} has no bitmap")));
            }
            let base = number * bpn;
            let mut kids = Vec::new();
            for pos in levels.b_c.ones_in(base, base + bpn) {
                let child_number = 1 + levels.b_c.rank1(pos);
                debug_assert_eq!(child_number, next_number);
                next_number += 1;
                let label = decode_label(pos - base, end_code, &sparse)?;
                let internal = levels.b_l.get(pos);
                let child_idx = nodes.len();
                nodes.push(TrieNode::new(label));
                kids.push(child_idx as NodeId);
                if depth + 1 < dense_levels {
                    queue.push_back((child_number, child_idx, depth + 1));
                } else {
                    frontier.push((child_idx, internal));
                }
            }
            if levels.b_l.ones_in(base, base + bpn).any(|p| !levels.b_c.get(p)) {
                return Err(Error::format("bitmap", 0, "b_l bit without matching b_c bit"));
            }
            nodes[idx].children = kids;
        }
        if next_number != n_dense + frontier.len() as u64 {
            return Err(Error::format("bitmap", 0, "dense node count mismatch"));
        }
        // annotations of dense nodes, in breadth-first (arena) order
        let dense_count = n_dense as usize;
        for idx in 0..dense_count {
            let leaf = nodes[idx].children.is_empty();
            read_annotation(&mut sparse, &mut nodes[idx], levels.n_pivots, leaf)?;
        }
        // internal dense children must actually have children
        for idx in 0..dense_count {
            for &c in &nodes[idx].children.clone() {
                let c = c as usize;
                if c < dense_count {
                    let flagged = levels.b_l.get(
                        (idx as u64) * bpn + label_code(nodes[c].label, end_code),
                    );
                    if flagged == nodes[c].children.is_empty() {
                        return Err(Error::format("bitmap", 0, "b_l disagrees with b_c"));
                    }
                }
            }
        }
    }

    for (slot, internal) in frontier {
        sparse.set_section("sparse");
        let rec = sparse.block()?;
        let base = sparse.offset() - rec.len();
        let mut r = Reader::with_base(rec, "subtree", base);
        // (parent arena index, remaining children) for the pre-order walk
        let mut pending: Vec<(usize, u32)> = Vec::new();
        let mut first = true;
        loop {
            let code = r.u64()?;
            let label = decode_label(code, end_code, &r)?;
            let n_children = r.u32()?;
            let mut node = TrieNode::new(label);
            read_annotation(&mut r, &mut node, levels.n_pivots, n_children == 0)?;
            let idx = if first && slot != usize::MAX {
                if nodes[slot].label != label || internal != (n_children > 0) {
                    return Err(r.error("subtree root disagrees with bitmaps"));
                }
                let keep = std::mem::take(&mut nodes[slot].children);
                node.children = keep;
                nodes[slot] = node;
                slot
            } else {
                nodes.push(node);
                let idx = nodes.len() - 1;
                if let Some((parent, _)) = pending.last() {
                    nodes[*parent].children.push(idx as NodeId);
                }
                idx
            };
            if first && slot == usize::MAX && label != Label::Root {
                return Err(r.error("first record is not the root"));
            }
            first = false;
            if let Some(top) = pending.last_mut() {
                top.1 -= 1;
            }
            if n_children > 0 {
                pending.push((idx, n_children));
            }
            while matches!(pending.last(), Some((_, 0))) {
                pending.pop();
            }
            if pending.is_empty() {
                break;
            }
        }
        r.expect_end()?;
    }
    sparse.expect_end()?;

    if nodes.is_empty() || nodes[0].label != Label::Root {
        return Err(Error::format("sparse", 0, "missing root"));
    }
    Ok(RpTrie::from_nodes(levels.form, nodes))
}

/// A shard's self-contained persisted trie: grid, measure, pivots and the
/// succinct node layers.
#[derive(Clone, Debug, PartialEq)]
pub struct TriePayload {
    pub grid: GridConfig,
    pub measure: Measure,
    pub pivots: PivotSet,
    pub dense_levels: u8,
    pub trie: RpTrie,
}

pub fn encode_payload(p: &TriePayload) -> Result<Vec<u8>> {
    let n_pivots = u8::try_from(p.pivots.len())
        .map_err(|_| Error::config("at most 255 pivots can be persisted"))?;
    if p.trie.pivot_count() != p.pivots.len() {
        return Err(Error::input("trie pivot ranges do not match the pivot set"));
    }
    let levels = encode_succinct(&p.trie, &p.grid, p.dense_levels)?;
    let mut w = Writer::new();
    w.bytes(PAYLOAD_MAGIC);
    w.u16(PAYLOAD_VERSION);
    w.f64(p.grid.origin.x);
    w.f64(p.grid.origin.y);
    w.f64(p.grid.side_u);
    w.u32(p.grid.level_l);
    w.u8(p.measure.to_byte());
    w.u8(n_pivots);
    w.u8(p.dense_levels);
    for t in &p.pivots.pivots {
        w.trajectory(t);
    }
    levels.b_c.write(&mut w);
    levels.b_l.write(&mut w);
    w.block(&levels.sparse_bytes);
    Ok(w.into_inner())
}

pub fn decode_payload(bytes: &[u8]) -> Result<TriePayload> {
    decode_payload_at(bytes, 0)
}

pub(crate) fn decode_payload_at(bytes: &[u8], base: usize) -> Result<TriePayload> {
    let mut r = Reader::with_base(bytes, "trie header", base);
    if r.take(4)? != PAYLOAD_MAGIC {
        return Err(Error::format("trie header", base, "bad magic"));
    }
    let version = r.u16()?;
    if version != PAYLOAD_VERSION {
        return Err(r.error(format!("unsupported trie version {version}")));
    }
    let ox = r.finite_f64()?;
    let oy = r.finite_f64()?;
    let side = r.f64()?;
    let level = r.u32()?;
    let grid = GridConfig::from_parts(Point::new(ox, oy), side, level)
        .map_err(|e| r.error(e.to_string()))?;
    let mb = r.u8()?;
    let measure = Measure::from_byte(mb).ok_or_else(|| r.error(format!("unknown measure {mb}")))?;
    let n_pivots = r.u8()? as usize;
    let dense_levels = r.u8()?;
    r.set_section("trie pivots");
    let pivots = (0..n_pivots).map(|_| r.trajectory()).collect::<Result<Vec<_>>>()?;
    if !measure.is_metric() && !pivots.is_empty() {
        return Err(r.error("pivots stored for a non-metric measure"));
    }
    let refs: Vec<&crate::model::Trajectory> = pivots.iter().collect();
    let score = super::pivots::pairwise_score(&refs, measure);
    r.set_section("trie bitmaps");
    let b_c = BitVec::read(&mut r)?;
    let b_l = BitVec::read(&mut r)?;
    r.set_section("trie sparse");
    let sparse = r.block()?.to_vec();
    r.expect_end()?;

    let levels = SuccinctLevels {
        dense_levels,
        bits_per_node: grid.cell_count() + 1,
        b_c,
        b_l,
        sparse_bytes: sparse,
        form: RefForm::for_measure(measure),
        n_pivots,
    };
    let trie = decode_succinct(&levels)?;
    Ok(TriePayload {
        grid,
        measure,
        pivots: PivotSet { pivots, score },
        dense_levels,
        trie,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{greedy_collection, running_grid, small_grid, table2};
    use crate::model::{build_grid_with_padding, BBox, Dataset, Trajectory};
    use crate::trie::{annotate, build_optimized_trie, build_trie, select_pivots};
    use crate::zorder::to_reference;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn annotated_example(measure: Measure) -> (RpTrie, PivotSet, GridConfig, Dataset) {
        let g = running_grid();
        let (data, _) = table2();
        let pivots = if measure.is_metric() {
            select_pivots(data.as_slice(), 2, 3, measure, 5).unwrap()
        } else {
            PivotSet::empty()
        };
        let refs: Vec<_> = data.iter().map(|t| to_reference(t, &g, measure).unwrap()).collect();
        let trie = annotate(build_trie(&refs).unwrap(), &pivots, measure, &g, &data).unwrap();
        (trie, pivots, g, data)
    }

    #[test]
    fn rank_and_iteration() {
        let mut bv = BitVec::zeros(200);
        for p in [0, 3, 63, 64, 130, 199] {
            bv.set(p);
        }
        bv.build_rank();
        assert_eq!(bv.rank1(0), 0);
        assert_eq!(bv.rank1(4), 2);
        assert_eq!(bv.rank1(64), 3);
        assert_eq!(bv.rank1(65), 4);
        assert_eq!(bv.rank1(200), 6);
        assert_eq!(bv.ones_in(3, 131).collect::<Vec<_>>(), vec![3, 63, 64, 130]);
    }

    #[test]
    fn round_trip_all_dense_depths() {
        for m in Measure::ALL {
            let (trie, _, g, _) = annotated_example(m);
            for d in 0..8u8 {
                let levels = encode_succinct(&trie, &g, d).unwrap();
                assert_eq!(decode_succinct(&levels).unwrap(), trie, "{m} dense={d}");
            }
        }
    }

    #[test]
    fn pure_byte_encoding_has_no_bitmaps() {
        let (trie, _, g, _) = annotated_example(Measure::Frechet);
        let levels = encode_succinct(&trie, &g, 0).unwrap();
        assert!(levels.b_c.is_empty() && levels.b_l.is_empty());
        assert_eq!(decode_succinct(&levels).unwrap(), trie);
    }

    #[test]
    fn chain_has_one_bit_per_dense_level() {
        let g = running_grid();
        let t = Trajectory::from_coords(1, &[(0.5, 0.5), (3.5, 2.5), (6.5, 6.5), (1.5, 7.5)]);
        let data = Dataset::new(vec![t.clone()]).unwrap();
        let r = to_reference(&t, &g, Measure::Dtw).unwrap();
        let trie = annotate(build_trie(&[r]).unwrap(), &PivotSet::empty(), Measure::Dtw, &g, &data).unwrap();
        let levels = encode_succinct(&trie, &g, 2).unwrap();
        assert_eq!(levels.b_c.len(), 2 * 65);
        assert_eq!(levels.b_c.ones_in(0, 65).count(), 1);
        assert_eq!(levels.b_c.ones_in(65, 130).count(), 1);
        assert_eq!(levels.dense_links(), 2);
    }

    #[test]
    fn greedy_trie_root_bitmap() {
        let g = small_grid();
        let trie = build_optimized_trie(&greedy_collection()).unwrap();
        let levels = encode_succinct(&trie, &g, 1).unwrap();
        let ones: Vec<u64> = levels.b_c.ones_in(0, 17).collect();
        assert_eq!(ones, vec![0b0011, 0b0100, 0b0101]);
        // all three first-level children have subtrees below them
        assert_eq!(levels.b_l.ones_in(0, 17).collect::<Vec<_>>(), ones);
        let decoded = decode_succinct(&levels).unwrap();
        assert_eq!(decoded, trie);
    }

    #[test]
    fn payload_round_trip_and_header() {
        let (trie, pivots, g, _) = annotated_example(Measure::Hausdorff);
        let p = TriePayload {
            grid: g,
            measure: Measure::Hausdorff,
            pivots,
            dense_levels: 2,
            trie,
        };
        let bytes = encode_payload(&p).unwrap();
        assert_eq!(&bytes[..4], b"RPTT");
        assert_eq!(u16::from_le_bytes([bytes[4], bytes[5]]), PAYLOAD_VERSION);
        assert_eq!(f64::from_le_bytes(bytes[22..30].try_into().unwrap()), 8.0);
        assert_eq!(u32::from_le_bytes(bytes[30..34].try_into().unwrap()), 8);
        assert_eq!(bytes[34], 0);
        assert_eq!(bytes[35], 2);
        assert_eq!(bytes[36], 2);
        let back = decode_payload(&bytes).unwrap();
        assert_eq!(back, p);
        assert_eq!(encode_payload(&back).unwrap(), bytes);
    }

    #[test]
    fn corrupt_payloads_are_rejected() {
        let (trie, pivots, g, _) = annotated_example(Measure::Frechet);
        let p = TriePayload {
            grid: g,
            measure: Measure::Frechet,
            pivots,
            dense_levels: 1,
            trie,
        };
        let bytes = encode_payload(&p).unwrap();
        for cut in [0, 3, 10, 40, bytes.len() / 2, bytes.len() - 1] {
            assert!(matches!(decode_payload(&bytes[..cut]), Err(Error::Format { .. })), "cut {cut}");
        }
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(decode_payload(&bad), Err(Error::Format { offset: 0, .. })));
        let mut bad = bytes.clone();
        bad[4] = 9;
        assert!(decode_payload(&bad).is_err());
        let mut long = bytes.clone();
        long.push(0);
        assert!(decode_payload(&long).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn random_tries_round_trip(seed in any::<u64>(), dense in 0u8..4, measure_ix in 0usize..3) {
            let measure = Measure::ALL[measure_ix];
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let g = build_grid_with_padding(&BBox::new(0.0, 0.0, 10.0, 10.0), 2.0, 0.001).unwrap();
            let n = rng.random_range(1..40);
            let data: Vec<Trajectory> = (0..n)
                .map(|id| {
                    let len = rng.random_range(1..6);
                    Trajectory::new(id, (0..len).map(|_| Point::new(rng.random_range(0.0..10.0), rng.random_range(0.0..10.0))).collect())
                })
                .collect();
            let data = Dataset::new(data).unwrap();
            let pivots = if measure.is_metric() {
                select_pivots(data.as_slice(), 1.min(data.len()), 2, measure, seed).unwrap()
            } else {
                PivotSet::empty()
            };
            let refs: Vec<_> = data.iter().map(|t| to_reference(t, &g, measure).unwrap()).collect();
            let trie = annotate(build_trie(&refs).unwrap(), &pivots, measure, &g, &data).unwrap();
            let payload = TriePayload { grid: g, measure, pivots, dense_levels: dense, trie };
            let bytes = encode_payload(&payload).unwrap();
            prop_assert_eq!(decode_payload(&bytes).unwrap(), payload);
        }
    }
}
