//! Little-endian byte writer/reader used by the persisted formats.

use crate::error::{Error, Result};
use crate::model::{Point, Trajectory};

#[derive(Default)]
pub(crate) struct Writer {
    pub(crate) buf: Vec<u8>,
}

impl Writer {
    pub(crate) fn new() -> Self {
        Writer { buf: Vec::new() }
    }

    pub(crate) fn u8(&mut self, v: u8) {
        self.buf.push(v);
    }

    pub(crate) fn u16(&mut self, v: u16) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub(crate) fn u32(&mut self, v: u32) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub(crate) fn u64(&mut self, v: u64) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub(crate) fn f64(&mut self, v: f64) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub(crate) fn bytes(&mut self, b: &[u8]) {
        self.buf.extend_from_slice(b);
    }

    /// `u64` byte length followed by the bytes.
    pub(crate) fn block(&mut self, b: &[u8]) {
        self.u64(b.len() as u64);
        self.bytes(b);
    }

    pub(crate) fn trajectory(&mut self, t: &Trajectory) {
        self.u64(t.id);
        self.u32(t.points.len() as u32);
        for p in &t.points {
            self.f64(p.x);
            self.f64(p.y);
        }
    }

    pub(crate) fn into_inner(self) -> Vec<u8> {
        self.buf
    }
}

pub(crate) struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
    /// Absolute offset of `data[0]` within the enclosing file, for messages.
    base: usize,
    section: &'static str,
}

impl<'a> Reader<'a> {
    pub(crate) fn new(data: &'a [u8], section: &'static str) -> Self {
        Reader {
            data,
            pos: 0,
            base: 0,
            section,
        }
    }

    pub(crate) fn with_base(data: &'a [u8], section: &'static str, base: usize) -> Self {
        Reader {
            data,
            pos: 0,
            base,
            section,
        }
    }

    pub(crate) fn set_section(&mut self, section: &'static str) {
        self.section = section;
    }

    pub(crate) fn offset(&self) -> usize {
        self.base + self.pos
    }

    pub(crate) fn remaining(&self) -> usize {
        self.data.len() - self.pos
    }

    pub(crate) fn error(&self, msg: impl Into<String>) -> Error {
        Error::format(self.section, self.offset(), msg)
    }

    pub(crate) fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.remaining() < n {
            return Err(self.error(format!(
                "truncated: need {n} bytes, {} left",
                self.remaining()
            )));
        }
        let s = &self.data[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn array<const N: usize>(&mut self) -> Result<[u8; N]> {
        let s = self.take(N)?;
        let mut a = [0u8; N];
        a.copy_from_slice(s);
        Ok(a)
    }

    pub(crate) fn u8(&mut self) -> Result<u8> {
        Ok(self.array::<1>()?[0])
    }

    pub(crate) fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.array()?))
    }

    pub(crate) fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.array()?))
    }

    pub(crate) fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.array()?))
    }

    pub(crate) fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.array()?))
    }

    /// A count that must fit in the remaining input at `min_each` bytes per item.
    pub(crate) fn count(&mut self, min_each: usize) -> Result<usize> {
        let at = self.offset();
        let n = self.u64()?;
        let need = (n as u128) * (min_each.max(1) as u128);
        if need > self.remaining() as u128 {
            return Err(Error::format(
                self.section,
                at,
                format!("count {n} exceeds remaining input"),
            ));
        }
        Ok(n as usize)
    }

    pub(crate) fn block(&mut self) -> Result<&'a [u8]> {
        let n = self.count(1)?;
        self.take(n)
    }

    pub(crate) fn finite_f64(&mut self) -> Result<f64> {
        let at = self.offset();
        let v = self.f64()?;
        if !v.is_finite() {
            return Err(Error::format(self.section, at, "non-finite coordinate"));
        }
        Ok(v)
    }

    pub(crate) fn trajectory(&mut self) -> Result<Trajectory> {
        let id = self.u64()?;
        let at = self.offset();
        let n = self.u32()? as usize;
        if n == 0 || n.saturating_mul(16) > self.remaining() {
            return Err(Error::format(
                self.section,
                at,
                format!("bad point count {n} for trajectory {id}"),
            ));
        }
        let mut points = Vec::with_capacity(n);
        for _ in 0..n {
            let x = self.finite_f64()?;
            let y = self.finite_f64()?;
            points.push(Point::new(x, y));
        }
        Ok(Trajectory::new(id, points))
    }

    pub(crate) fn expect_end(&self) -> Result<()> {
        if self.remaining() != 0 {
            return Err(self.error(format!("{} trailing bytes", self.remaining())));
        }
        Ok(())
    }
}
