//! Plain dense matrices and element unraveling order.

use std::fmt;

use crate::error::{Error, Result};

/// How a matrix is unraveled into a flat sequence of elements.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Order {
    #[default]
    RowMajor,
    ColMajor,
}

impl Order {
    /// Linear position of `(i, j)` in a `rows x cols` matrix.
    #[inline]
    pub fn index(self, i: usize, j: usize, rows: usize, cols: usize) -> usize {
        match self {
            Order::RowMajor => i * cols + j,
            Order::ColMajor => j * rows + i,
        }
    }

    #[inline]
    pub fn coords(self, idx: usize, rows: usize, cols: usize) -> (usize, usize) {
        match self {
            Order::RowMajor => (idx / cols, idx % cols),
            Order::ColMajor => (idx % rows, idx / rows),
        }
    }

    pub fn code(self) -> u8 {
        match self {
            Order::RowMajor => 0,
            Order::ColMajor => 1,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(Order::RowMajor),
            1 => Some(Order::ColMajor),
            _ => None,
        }
    }
}

/// Row-major `u64` matrix with at least one row and one column.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<u64>) -> Result<Self> {
        check_shape(rows, cols)?;
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} values for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        check_shape(rows, cols)?;
        Ok(Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        Ok(m)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u64) -> Result<Self> {
        check_shape(rows, cols)?;
        let data = (0..rows * cols).map(|idx| f(idx / cols, idx % cols)).collect();
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows<R: AsRef<[u64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != cols) {
            return Err(Error::ShapeMismatch("rows of unequal length".into()));
        }
        let data = rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect();
        Self::new(rows.len(), cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> Option<u64> {
        (i < self.rows && j < self.cols).then(|| self.data[i * self.cols + j])
    }

    pub fn set(&mut self, i: usize, j: usize, value: u64) -> Result<()> {
        if i >= self.rows || j >= self.cols {
            return Err(Error::oob(format!("({i}, {j}) in {}x{}", self.rows, self.cols)));
        }
        self.data[i * self.cols + j] = value;
        Ok(())
    }

    /// Row-major element slice.
    pub fn as_slice(&self) -> &[u64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn max(&self) -> u64 {
        self.data.iter().copied().max().unwrap_or(0)
    }

    /// Elements in the given unravel order.
    pub fn iter_order(&self, order: Order) -> impl Iterator<Item = u64> + '_ {
        (0..self.data.len()).map(move |idx| {
            let (i, j) = order.coords(idx, self.rows, self.cols);
            self.data[i * self.cols + j]
        })
    }
}

impl fmt::Display for DenseMatrix {
    /// One row per line, values separated by single spaces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let mut first = true;
            for v in self.row(i) {
                if !first {
                    f.write_str(" ")?;
                }
                write!(f, "{v}")?;
                first = false;
            }
            f.write_str("\n")?;
        }
        Ok(())
    }
}

pub(crate) fn check_shape(rows: usize, cols: usize) -> Result<()> {
    if rows == 0 || cols == 0 {
        return Err(Error::ShapeMismatch(format!(
            "matrix must have at least one row and column, got {rows}x{cols}"
        )));
    }
    rows.checked_mul(cols)
        .and_then(|n| n.checked_mul(64))
        .ok_or_else(|| Error::ShapeMismatch(format!("{rows}x{cols} is too large")))?;
    Ok(())
}
