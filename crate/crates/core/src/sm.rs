//! Fixed-width packing: every element takes `bit_length(max)` bits.
//!
//! Element number `idx` (in unravel order) occupies bits
//! `[idx * width, (idx + 1) * width)`, so any element is reachable with at
//! most two word reads.

use crate::bitstream::{bit_length, BitBuffer};
use crate::error::{Error, Result};
use crate::matrix::{check_shape, DenseMatrix, Order};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SmMatrix {
    rows: usize,
    cols: usize,
    width: u32,
    order: Order,
    data: BitBuffer,
}

impl SmMatrix {
    pub fn compress(m: &DenseMatrix, order: Order) -> Self {
        let width = bit_length(m.max());
        Self::from_values(m.rows(), m.cols(), width, order, m.iter_order(order))
            .expect("every element fits the width of the maximum")
    }

    /// Packs `rows * cols` values given in `order` at a fixed `width`.
    pub fn from_values(
        rows: usize,
        cols: usize,
        width: u32,
        order: Order,
        values: impl IntoIterator<Item = u64>,
    ) -> Result<Self> {
        check_shape(rows, cols)?;
        if !(1..=64).contains(&width) {
            return Err(Error::InvalidWidth(width));
        }
        let n = rows * cols;
        let mut data = BitBuffer::with_capacity(n * width as usize);
        let mut count = 0;
        for v in values.into_iter().take(n) {
            if bit_length(v) > width {
                return Err(Error::WidthOverflow {
                    value: v,
                    needed: bit_length(v),
                    width,
                });
            }
            data.push_field(width, v)?;
            count += 1;
        }
        if count != n {
            return Err(Error::ShapeMismatch(format!(
                "{count} values for a {rows}x{cols} matrix"
            )));
        }
        Ok(Self {
            rows,
            cols,
            width,
            order,
            data,
        })
    }

    /// All-zero matrix with the given chunk width; fill it with [`SmMatrix::set`].
    pub fn zeroed(rows: usize, cols: usize, width: u32, order: Order) -> Result<Self> {
        check_shape(rows, cols)?;
        if !(1..=64).contains(&width) {
            return Err(Error::InvalidWidth(width));
        }
        Ok(Self {
            rows,
            cols,
            width,
            order,
            data: BitBuffer::zeroed(rows * cols * width as usize),
        })
    }

    /// Reassembles a matrix from a stored buffer (e.g. a container payload).
    ///
    /// The width must be the minimal one for the stored maximum, as produced
    /// by [`SmMatrix::compress`]; otherwise re-compression would not reproduce
    /// the buffer.
    pub fn from_parts(rows: usize, cols: usize, width: u32, order: Order, data: BitBuffer) -> Result<Self> {
        check_shape(rows, cols)?;
        if !(1..=64).contains(&width) {
            return Err(Error::InvalidWidth(width));
        }
        let expected = rows * cols * width as usize;
        if data.bit_len() != expected {
            return Err(Error::corrupt(format!(
                "expected {expected} bits for {rows}x{cols} at width {width}, found {}",
                data.bit_len()
            )));
        }
        let m = Self {
            rows,
            cols,
            width,
            order,
            data,
        };
        let max = m.iter().max().unwrap_or(0);
        if bit_length(max) != width {
            return Err(Error::corrupt(format!(
                "width {width} is not minimal for maximum element {max}"
            )));
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn data(&self) -> &BitBuffer {
        &self.data
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

    fn position(&self, i: usize, j: usize) -> Result<usize> {
        if i >= self.rows || j >= self.cols {
            return Err(Error::oob(format!("({i}, {j}) in {}x{}", self.rows, self.cols)));
        }
        Ok(self.order.index(i, j, self.rows, self.cols) * self.width as usize)
    }

    pub fn get(&self, i: usize, j: usize) -> Result<u64> {
        let pos = self.position(i, j)?;
        Ok(self.data.read_unchecked(pos, self.width))
    }

    /// Element at linear position `idx` of the unravel order.
    #[inline]
    pub fn get_linear(&self, idx: usize) -> u64 {
        self.data.read_unchecked(idx * self.width as usize, self.width)
    }

    pub fn set(&mut self, i: usize, j: usize, value: u64) -> Result<()> {
        let pos = self.position(i, j)?;
        if bit_length(value) > self.width {
            return Err(Error::WidthOverflow {
                value,
                needed: bit_length(value),
                width: self.width,
            });
        }
        self.data.write_field(pos, self.width, value)
    }

    /// Re-encodes at a larger chunk width.
    pub fn widen(&self, new_width: u32) -> Result<Self> {
        if new_width < self.width {
            return Err(Error::NarrowingRequested {
                from: self.width,
                to: new_width,
            });
        }
        if new_width == self.width {
            return Ok(self.clone());
        }
        Self::from_values(self.rows, self.cols, new_width, self.order, self.iter())
    }

    /// Values in unravel order.
    pub fn iter(&self) -> impl ExactSizeIterator<Item = u64> + '_ {
        (0..self.len()).map(|idx| self.get_linear(idx))
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
