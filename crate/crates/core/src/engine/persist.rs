//! `RPSX` index container, little-endian:
//!
//! ```text
//! "RPSX" version:u16
//! manifest_len:u32 manifest_json crc32:u32
//! pivots      len:u64 [count:u32 trajectory*]              crc32:u32
//! assignment  len:u64 [partitions:u32 count:u64 (id:u64 p:u32)*] crc32:u32
//! dataset     len:u64 [count:u64 trajectory*]              crc32:u32
//! shards:u32  (len:u64 trie_payload crc32:u32)*
//! ```
//!
//! A trajectory is `id:u64 n:u32 (x:f64 y:f64)*`.

use std::fs;
use std::path::Path;

use crate::codec::{Reader, Writer};
use crate::error::{Error, Result};
use crate::model::Dataset;
use crate::partition::PartitionAssignment;
use crate::trie::{encode_payload, PivotSet};

use super::{dataset_sha256, Manifest, PartitionedIndex, Shard};

pub const INDEX_MAGIC: &[u8; 4] = b"RPSX";
pub const INDEX_VERSION: u16 = 1;

fn checked_block(w: &mut Writer, body: &[u8]) {
    w.block(body);
    w.u32(crc32fast::hash(body));
}

/// Serializes the index; identical inputs give identical bytes.
pub fn write_index(index: &PartitionedIndex) -> Result<Vec<u8>> {
    let mut w = Writer::new();
    w.bytes(INDEX_MAGIC);
    w.u16(INDEX_VERSION);

    let manifest = serde_json::to_vec(&index.manifest)
        .map_err(|e| Error::input(format!("manifest not serializable: {e}")))?;
    let len = u32::try_from(manifest.len()).map_err(|_| Error::input("manifest too large"))?;
    w.u32(len);
    w.bytes(&manifest);
    w.u32(crc32fast::hash(&manifest));

    let mut b = Writer::new();
    b.u32(index.pivots.len() as u32);
    for t in &index.pivots.pivots {
        b.trajectory(t);
    }
    checked_block(&mut w, &b.into_inner());

    let mut b = Writer::new();
    b.u32(index.assignment.n_partitions() as u32);
    b.u64(index.assignment.partition_of.len() as u64);
    for (&id, &p) in &index.assignment.partition_of {
        b.u64(id);
        b.u32(p as u32);
    }
    checked_block(&mut w, &b.into_inner());

    let mut b = Writer::new();
    b.u64(index.dataset.len() as u64);
    for t in &index.dataset {
        b.trajectory(t);
    }
    checked_block(&mut w, &b.into_inner());

    w.u32(index.shards.len() as u32);
    for shard in &index.shards {
        checked_block(&mut w, &encode_payload(&index.payload(shard))?);
    }
    Ok(w.into_inner())
}

/// Reads a length-prefixed block and verifies its trailing CRC32. Returns the
/// body and its absolute offset.
fn read_checked<'a>(r: &mut Reader<'a>, section: &'static str) -> Result<(&'a [u8], usize)> {
    r.set_section(section);
    let body = r.block()?;
    let at = r.offset();
    let body_offset = at - body.len();
    let crc = r.u32()?;
    if crc != crc32fast::hash(body) {
        return Err(Error::format(section, at, "checksum mismatch"));
    }
    Ok((body, body_offset))
}

/// Parses and cross-checks a serialized index.
pub fn read_index(bytes: &[u8]) -> Result<PartitionedIndex> {
    let mut r = Reader::new(bytes, "header");
    if r.take(4)? != INDEX_MAGIC {
        return Err(Error::format("header", 0, "bad magic"));
    }
    let version = r.u16()?;
    if version != INDEX_VERSION {
        return Err(Error::format("header", 4, format!("unsupported index version {version}")));
    }

    r.set_section("manifest");
    let len = r.u32()? as usize;
    let start = r.offset();
    let raw = r.take(len)?;
    let crc = r.u32()?;
    if crc != crc32fast::hash(raw) {
        return Err(Error::format("manifest", start, "checksum mismatch"));
    }
    let manifest: Manifest = serde_json::from_slice(raw)
        .map_err(|e| Error::format("manifest", start, format!("invalid manifest: {e}")))?;
    let grid = manifest.grid;
    if crate::model::GridConfig::from_parts(grid.origin, grid.side_u, grid.level_l).ok() != Some(grid) {
        return Err(Error::format("manifest", start, "inconsistent grid parameters"));
    }
    let measure = manifest.params.measure;

    let (body, base) = read_checked(&mut r, "pivots")?;
    let mut b = Reader::with_base(body, "pivots", base);
    let n = b.u32()? as usize;
    if n.saturating_mul(12) > b.remaining() {
        return Err(b.error(format!("pivot count {n} exceeds block")));
    }
    let pivots = (0..n).map(|_| b.trajectory()).collect::<Result<Vec<_>>>()?;
    b.expect_end()?;
    let ids: Vec<u64> = pivots.iter().map(|t| t.id).collect();
    if ids != manifest.pivot_ids || (!measure.is_metric() && !pivots.is_empty()) {
        return Err(Error::format("pivots", base, "pivots disagree with the manifest"));
    }
    let refs: Vec<_> = pivots.iter().collect();
    let score = crate::trie::pairwise_score(&refs, measure);
    let pivots = PivotSet { pivots, score };

    let (body, base) = read_checked(&mut r, "assignment")?;
    let mut b = Reader::with_base(body, "assignment", base);
    let n_partitions = b.u32()? as usize;
    let n = b.count(12)?;
    let mut pairs = Vec::with_capacity(n);
    for _ in 0..n {
        pairs.push((b.u64()?, b.u32()? as usize));
    }
    b.expect_end()?;
    let assignment = PartitionAssignment::from_pairs(n_partitions, pairs)
        .map_err(|e| Error::format("assignment", base, e.to_string()))?;
    if assignment.sizes != manifest.shard_sizes {
        return Err(Error::format("assignment", base, "shard sizes disagree with the manifest"));
    }

    let (body, base) = read_checked(&mut r, "dataset")?;
    let mut b = Reader::with_base(body, "dataset", base);
    let n = b.count(12)?;
    let trajectories = (0..n).map(|_| b.trajectory()).collect::<Result<Vec<_>>>()?;
    b.expect_end()?;
    let dataset = Dataset::new(trajectories).map_err(|e| Error::format("dataset", base, e.to_string()))?;
    if dataset.len() != manifest.n_trajectories || dataset_sha256(&dataset) != manifest.dataset_sha256 {
        return Err(Error::format("dataset", base, "dataset checksum mismatch"));
    }
    if dataset.len() != assignment.partition_of.len()
        || dataset.iter().any(|t| !assignment.partition_of.contains_key(&t.id))
    {
        return Err(Error::format("assignment", base, "assignment does not cover the dataset"));
    }

    r.set_section("shards");
    let at = r.offset();
    let n_shards = r.u32()? as usize;
    if n_shards != n_partitions {
        return Err(Error::format("shards", at, format!("{n_shards} shards for {n_partitions} partitions")));
    }
    let members = assignment.members();
    let mut shards = Vec::with_capacity(n_shards);
    for ids in &members {
        let (body, base) = read_checked(&mut r, "shard payload")?;
        let payload = crate::trie::decode_payload_at(body, base)?;
        if payload.grid != grid || payload.measure != measure || payload.pivots != pivots {
            return Err(Error::format("shard payload", base, "shard disagrees with the index header"));
        }
        let mut tids = payload.trie.subtree_tids(0);
        tids.sort_unstable();
        if &tids != ids {
            return Err(Error::format("shard payload", base, "shard members disagree with the assignment"));
        }
        let data = Dataset::new(ids.iter().map(|id| dataset.get(*id).expect("covered above").clone()).collect())?;
        shards.push(Shard {
            trie: payload.trie,
            data,
        });
    }
    r.set_section("trailer");
    r.expect_end()?;

    Ok(PartitionedIndex {
        grid,
        measure,
        pivots,
        assignment,
        shards,
        manifest,
        dataset,
    })
}

pub fn save_index(index: &PartitionedIndex, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, write_index(index)?)?;
    Ok(())
}

pub fn load_index(path: impl AsRef<Path>) -> Result<PartitionedIndex> {
    read_index(&fs::read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{build_index, BuildParams};
    use crate::fixtures::table2;
    use crate::model::Measure;

    fn index() -> PartitionedIndex {
        let (data, _) = table2();
        let params = BuildParams {
            partitions: 2,
            pivots: 2,
            pivot_groups: 4,
            seed: 7,
            ..BuildParams::new(Measure::Hausdorff, 1.0)
        };
        build_index(&data, &params).unwrap()
    }

    #[test]
    fn round_trip_answers() {
        let (_, q) = table2();
        let idx = index();
        let bytes = write_index(&idx).unwrap();
        let back = read_index(&bytes).unwrap();
        assert_eq!(back.manifest, idx.manifest);
        for (a, b) in back.shards.iter().zip(&idx.shards) {
            assert_eq!(a.trie, b.trie);
        }
        for k in 1..=5 {
            assert_eq!(back.query(&q.points, k).unwrap().hits, idx.query(&q.points, k).unwrap().hits);
        }
        assert_eq!(write_index(&back).unwrap(), bytes);
        assert_eq!(write_index(&index()).unwrap(), bytes);
    }

    #[test]
    fn corruption_is_detected() {
        let bytes = write_index(&index()).unwrap();
        for cut in [0, 3, 5, 40, bytes.len() / 2, bytes.len() - 1] {
            assert!(matches!(read_index(&bytes[..cut]), Err(Error::Format { .. })), "cut {cut}");
        }
        let mut extra = bytes.clone();
        extra.push(0);
        assert!(matches!(read_index(&extra), Err(Error::Format { section: "trailer", .. })));
        let mut version = bytes.clone();
        version[4] = 9;
        assert!(matches!(read_index(&version), Err(Error::Format { section: "header", .. })));
        for pos in (6..bytes.len()).step_by(7) {
            let mut b = bytes.clone();
            b[pos] ^= 0x5a;
            assert!(matches!(read_index(&b), Err(Error::Format { .. })), "flip at {pos}");
        }
    }
}
