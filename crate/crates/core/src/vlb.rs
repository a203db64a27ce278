//! Length-prefixed packing: each element is a `k`-bit prefix holding its bit
//! length `b`, followed by a `b`-bit payload.
//!
//! `k = bit_length(bit_length(max))`, so `k <= 7`. The prefix sits at the
//! lower bit positions, payload right after it. Random access goes through
//! checkpoints: the bit offset of every `stride`-th element is recorded at
//! construction, and a lookup hops over at most `stride - 1` elements by
//! reading their prefixes.

use crate::bitstream::{bit_length, BitBuffer};
use crate::error::{Error, Result};
use crate::matrix::{check_shape, DenseMatrix, Order};

pub const DEFAULT_STRIDE: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VlbMatrix {
    rows: usize,
    cols: usize,
    k: u32,
    order: Order,
    data: BitBuffer,
    stride: usize,
    /// Bit offset of element `c * stride`.
    checkpoints: Vec<usize>,
}

/// Prefix width for a matrix whose largest element is `max`.
pub fn prefix_width(max: u64) -> u32 {
    bit_length(bit_length(max) as u64)
}

impl VlbMatrix {
    pub fn compress(m: &DenseMatrix, order: Order, stride: usize) -> Result<Self> {
        if stride == 0 {
            return Err(Error::invalid("checkpoint stride must be at least 1"));
        }
        let k = prefix_width(m.max());
        let n = m.len();
        let mut data = BitBuffer::with_capacity(n * (k as usize + 8));
        let mut checkpoints = Vec::with_capacity(n.div_ceil(stride));
        for (idx, v) in m.iter_order(order).enumerate() {
            if idx % stride == 0 {
                checkpoints.push(data.bit_len());
            }
            let b = bit_length(v);
            data.push_field(k, b as u64)?;
            data.push_field(b, v)?;
        }
        Ok(Self {
            rows: m.rows(),
            cols: m.cols(),
            k,
            order,
            data,
            stride,
            checkpoints,
        })
    }

    /// Rebuilds a matrix from a stored stream, validating every element and
    /// recomputing the checkpoints.
    ///
    /// The buffer may be longer than the encoded elements only by zero bits;
    /// it is trimmed to the exact encoded length.
    pub fn from_parts(
        rows: usize,
        cols: usize,
        k: u32,
        order: Order,
        mut data: BitBuffer,
        stride: usize,
    ) -> Result<Self> {
        check_shape(rows, cols)?;
        if stride == 0 {
            return Err(Error::invalid("checkpoint stride must be at least 1"));
        }
        if !(1..=7).contains(&k) {
            return Err(Error::corrupt(format!("prefix width {k} outside 1..=7")));
        }
        let n = rows * cols;
        let mut checkpoints = Vec::with_capacity(n.div_ceil(stride));
        let mut pos = 0;
        let mut max_len = 0;
        for idx in 0..n {
            if idx % stride == 0 {
                checkpoints.push(pos);
            }
            let (v, next) = decode_checked(&data, k, pos)?;
            max_len = max_len.max(bit_length(v));
            pos = next;
        }
        if bit_length(max_len as u64) != k {
            return Err(Error::corrupt(format!(
                "prefix width {k} does not match longest element of {max_len} bits"
            )));
        }
        data.truncate(pos)?;
        Ok(Self {
            rows,
            cols,
            k,
            order,
            data,
            stride,
            checkpoints,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn data(&self) -> &BitBuffer {
        &self.data
    }

    pub fn stride(&self) -> usize {
        self.stride
    }

    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bits_used(&self) -> usize {
        self.data.bit_len()
    }

    /// `(element index, bit offset)` pairs.
    pub fn checkpoints(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.checkpoints
            .iter()
            .enumerate()
            .map(|(c, &off)| (c * self.stride, off))
    }

    #[inline]
    fn decode_at(&self, pos: usize) -> (u64, usize) {
        let b = self.data.read_unchecked(pos, self.k) as u32;
        let v = self.data.read_unchecked(pos + self.k as usize, b);
        (v, pos + (self.k + b) as usize)
    }

    #[inline]
    fn skip(&self, pos: usize) -> usize {
        let b = self.data.read_unchecked(pos, self.k) as usize;
        pos + self.k as usize + b
    }

    /// Bit offset of element `idx` in unravel order.
    fn seek(&self, idx: usize) -> usize {
        let c = idx / self.stride;
        (c * self.stride..idx).fold(self.checkpoints[c], |pos, _| self.skip(pos))
    }

    pub fn get(&self, i: usize, j: usize) -> Result<u64> {
        if i >= self.rows || j >= self.cols {
            return Err(Error::oob(format!("({i}, {j}) in {}x{}", self.rows, self.cols)));
        }
        Ok(self.get_linear(self.order.index(i, j, self.rows, self.cols)))
    }

    pub fn get_linear(&self, idx: usize) -> u64 {
        self.decode_at(self.seek(idx)).0
    }

    /// Sequential decode in unravel order.
    pub fn iter(&self) -> VlbIter<'_> {
        self.iter_from(0)
    }

    /// Sequential decode starting at element `idx`.
    pub fn iter_from(&self, idx: usize) -> VlbIter<'_> {
        let idx = idx.min(self.len());
        let pos = if idx < self.len() { self.seek(idx) } else { self.data.bit_len() };
        VlbIter {
            m: self,
            pos,
            remaining: self.len() - idx,
        }
    }

    pub fn decompress(&self) -> DenseMatrix {
        let mut out = vec![0; self.len()];
        for (idx, v) in self.iter().enumerate() {
            let (i, j) = self.order.coords(idx, self.rows, self.cols);
            out[i * self.cols + j] = v;
        }
        DenseMatrix::new(self.rows, self.cols, out).expect("shape already checked")
    }
}

fn decode_checked(data: &BitBuffer, k: u32, pos: usize) -> Result<(u64, usize)> {
    let b = data
        .read_field(pos, k)
        .map_err(|_| Error::corrupt(format!("prefix at bit {pos} runs past the end")))? as u32;
    if b == 0 || b > 64 {
        return Err(Error::corrupt(format!("invalid length prefix {b} at bit {pos}")));
    }
    let payload = pos + k as usize;
    let v = data
        .read_field(payload, b)
        .map_err(|_| Error::corrupt(format!("{b}-bit payload at bit {payload} runs past the end")))?;
    if bit_length(v) != b {
        return Err(Error::corrupt(format!(
            "non-canonical element at bit {pos}: prefix {b}, value {v}"
        )));
    }
    Ok((v, payload + b as usize))
}

pub struct VlbIter<'a> {
    m: &'a VlbMatrix,
    pos: usize,
    remaining: usize,
}

impl Iterator for VlbIter<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.remaining == 0 {
            return None;
        }
        let (v, next) = self.m.decode_at(self.pos);
        self.pos = next;
        self.remaining -= 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining, Some(self.remaining))
    }
}

impl ExactSizeIterator for VlbIter<'_> {}
