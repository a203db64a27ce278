//! Arithmetic on compressed matrices.
//!
//! Operands are read element by element through their packed form; results
//! are always fixed-width packed at the minimal width of their largest
//! element. Results are built in two passes (find the maximum, then fill), so
//! no operation materializes a dense copy of its inputs. `matmul` buffers one
//! row of the left operand and one accumulator row.

use crate::bitstream::bit_length;
use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, Order};
use crate::sm::SmMatrix;
use crate::vlb::{VlbMatrix, DEFAULT_STRIDE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Sm,
    Vlb,
}

impl Method {
    pub fn code(self) -> u8 {
        match self {
            Method::Sm => 1,
            Method::Vlb => 2,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            1 => Some(Method::Sm),
            2 => Some(Method::Vlb),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub enum CompressedMatrix {
    Sm(SmMatrix),
    Vlb(VlbMatrix),
}

impl From<SmMatrix> for CompressedMatrix {
    fn from(m: SmMatrix) -> Self {
        CompressedMatrix::Sm(m)
    }
}

impl From<VlbMatrix> for CompressedMatrix {
    fn from(m: VlbMatrix) -> Self {
        CompressedMatrix::Vlb(m)
    }
}

impl CompressedMatrix {
    pub fn compress(m: &DenseMatrix, method: Method, order: Order) -> Self {
        match method {
            Method::Sm => SmMatrix::compress(m, order).into(),
            Method::Vlb => VlbMatrix::compress(m, order, DEFAULT_STRIDE)
                .expect("default stride is nonzero")
                .into(),
        }
    }

    pub fn sm(m: &DenseMatrix) -> Self {
        Self::compress(m, Method::Sm, Order::RowMajor)
    }

    pub fn vlb(m: &DenseMatrix) -> Self {
        Self::compress(m, Method::Vlb, Order::RowMajor)
    }

    pub fn method(&self) -> Method {
        match self {
            CompressedMatrix::Sm(_) => Method::Sm,
            CompressedMatrix::Vlb(_) => Method::Vlb,
        }
    }

    pub fn rows(&self) -> usize {
        match self {
            CompressedMatrix::Sm(m) => m.rows(),
            CompressedMatrix::Vlb(m) => m.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            CompressedMatrix::Sm(m) => m.cols(),
            CompressedMatrix::Vlb(m) => m.cols(),
        }
    }

    pub fn order(&self) -> Order {
        match self {
            CompressedMatrix::Sm(m) => m.order(),
            CompressedMatrix::Vlb(m) => m.order(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows() * self.cols()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bits_used(&self) -> usize {
        match self {
            CompressedMatrix::Sm(m) => m.bits_used(),
            CompressedMatrix::Vlb(m) => m.bits_used(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Result<u64> {
        match self {
            CompressedMatrix::Sm(m) => m.get(i, j),
            CompressedMatrix::Vlb(m) => m.get(i, j),
        }
    }

    pub fn decompress(&self) -> DenseMatrix {
        match self {
            CompressedMatrix::Sm(m) => m.decompress(),
            CompressedMatrix::Vlb(m) => m.decompress(),
        }
    }

    /// Elements in unravel order of the underlying representation.
    pub fn iter(&self) -> Box<dyn Iterator<Item = u64> + '_> {
        match self {
            CompressedMatrix::Sm(m) => Box::new(m.iter()),
            CompressedMatrix::Vlb(m) => Box::new(m.iter()),
        }
    }

    /// Elements in row-major order regardless of representation.
    pub fn iter_row_major(&self) -> Box<dyn Iterator<Item = u64> + '_> {
        if self.order() == Order::RowMajor {
            return self.iter();
        }
        let (rows, cols) = (self.rows(), self.cols());
        match self {
            CompressedMatrix::Sm(m) => Box::new((0..rows * cols).map(move |idx| {
                m.get_linear(Order::ColMajor.index(idx / cols, idx % cols, rows, cols))
            })),
            CompressedMatrix::Vlb(m) => Box::new((0..rows * cols).map(move |idx| {
                m.get_linear(Order::ColMajor.index(idx / cols, idx % cols, rows, cols))
            })),
        }
    }

    /// Copies row `i` into `out` (length `cols`).
    fn read_row(&self, i: usize, out: &mut [u64]) {
        let (rows, cols) = (self.rows(), self.cols());
        match (self, self.order()) {
            (CompressedMatrix::Vlb(m), Order::RowMajor) => {
                for (slot, v) in out.iter_mut().zip(m.iter_from(i * cols)) {
                    *slot = v;
                }
            }
            (CompressedMatrix::Sm(m), order) => {
                for (j, slot) in out.iter_mut().enumerate() {
                    *slot = m.get_linear(order.index(i, j, rows, cols));
                }
            }
            (CompressedMatrix::Vlb(m), order) => {
                for (j, slot) in out.iter_mut().enumerate() {
                    *slot = m.get_linear(order.index(i, j, rows, cols));
                }
            }
        }
    }

    pub fn max(&self) -> u64 {
        self.iter().max().unwrap_or(0)
    }

    /// Element-wise equality, independent of representation and order.
    pub fn equals(&self, other: &CompressedMatrix) -> bool {
        self.rows() == other.rows()
            && self.cols() == other.cols()
            && self.iter_row_major().eq(other.iter_row_major())
    }

    pub fn add(&self, other: &CompressedMatrix) -> Result<CompressedMatrix> {
        if (self.rows(), self.cols()) != (other.rows(), other.cols()) {
            return Err(Error::ShapeMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        let cols = self.cols();
        let sums = || {
            self.iter_row_major()
                .zip(other.iter_row_major())
                .enumerate()
                .map(move |(idx, (a, b))| {
                    a.checked_add(b).ok_or(Error::ArithmeticOverflow {
                        row: idx / cols,
                        col: idx % cols,
                    })
                })
        };
        pack_two_pass(self.rows(), cols, sums)
    }

    pub fn scalar_mul(&self, s: u64) -> Result<CompressedMatrix> {
        let cols = self.cols();
        let products = || {
            self.iter_row_major().enumerate().map(move |(idx, a)| {
                a.checked_mul(s).ok_or(Error::ArithmeticOverflow {
                    row: idx / cols,
                    col: idx % cols,
                })
            })
        };
        pack_two_pass(self.rows(), cols, products)
    }

    pub fn transpose(&self) -> Result<CompressedMatrix> {
        let (rows, cols) = (self.rows(), self.cols());
        let width = bit_length(self.max());
        let mut out = SmMatrix::zeroed(cols, rows, width, Order::RowMajor)?;
        for (idx, v) in self.iter_row_major().enumerate() {
            out.set(idx % cols, idx / cols, v)?;
        }
        Ok(out.into())
    }

    /// Standard product with checked `u64` accumulation.
    pub fn matmul(&self, other: &CompressedMatrix) -> Result<CompressedMatrix> {
        if self.cols() != other.rows() {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        let (n, inner, m) = (self.rows(), self.cols(), other.cols());

        let mut a_row = vec![0u64; inner];
        let mut b_row = vec![0u64; m];
        let mut acc = vec![0u64; m];
        // Each output row i is sum over t of a(i,t) * row t of b.
        let mut product_row = |i: usize, acc: &mut [u64]| -> Result<()> {
            self.read_row(i, &mut a_row);
            acc.fill(0);
            for (t, &a) in a_row.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                other.read_row(t, &mut b_row);
                for (j, (slot, &b)) in acc.iter_mut().zip(&b_row).enumerate() {
                    *slot = a
                        .checked_mul(b)
                        .and_then(|p| slot.checked_add(p))
                        .ok_or(Error::ArithmeticOverflow { row: i, col: j })?;
                }
            }
            Ok(())
        };

        let mut max = 0;
        for i in 0..n {
            product_row(i, &mut acc)?;
            max = acc.iter().copied().fold(max, u64::max);
        }
        let mut out = SmMatrix::zeroed(n, m, bit_length(max), Order::RowMajor)?;
        for i in 0..n {
            product_row(i, &mut acc)?;
            for (j, &v) in acc.iter().enumerate() {
                out.set(i, j, v)?;
            }
        }
        Ok(out.into())
    }
}

impl PartialEq for CompressedMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl Eq for CompressedMatrix {}

fn pack_two_pass<I>(rows: usize, cols: usize, values: impl Fn() -> I) -> Result<CompressedMatrix>
where
    I: Iterator<Item = Result<u64>>,
{
    let mut max = 0;
    for v in values() {
        max = max.max(v?);
    }
    let packed = SmMatrix::from_values(
        rows,
        cols,
        bit_length(max),
        Order::RowMajor,
        values().map(|v| v.expect("first pass succeeded")),
    )?;
    Ok(packed.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dm<const C: usize>(rows: &[[u64; C]]) -> DenseMatrix {
        DenseMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn add_ones() {
        let ones = CompressedMatrix::vlb(&dm(&[[1, 1], [1, 1]]));
        let sum = ones.add(&ones).unwrap();
        assert_eq!(sum.decompress(), dm(&[[2, 2], [2, 2]]));
        match sum {
            CompressedMatrix::Sm(s) => assert_eq!(s.width(), 2),
            _ => panic!("arithmetic results are fixed-width packed"),
        }
    }

    #[test]
    fn add_zero_is_identity() {
        let row = dm(&[[900, 1023, 721, 256, 1, 10, 700, 20]]);
        let a = CompressedMatrix::sm(&row);
        let z = CompressedMatrix::vlb(&DenseMatrix::zeros(1, 8).unwrap());
        let sum = a.add(&z).unwrap();
        match (&sum, &a) {
            (CompressedMatrix::Sm(s), CompressedMatrix::Sm(orig)) => assert_eq!(s, orig),
            _ => unreachable!(),
        }
    }

    #[test]
    fn add_errors() {
        let a = CompressedMatrix::sm(&dm(&[[u64::MAX, 0]]));
        let b = CompressedMatrix::sm(&dm(&[[1, 0]]));
        assert!(matches!(a.add(&b), Err(Error::ArithmeticOverflow { row: 0, col: 0 })));
        let c = CompressedMatrix::sm(&dm(&[[1], [0]]));
        assert!(matches!(a.add(&c), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn scalar_mul_cases() {
        let m = dm(&[[3, 5], [7, 0]]);
        let a = CompressedMatrix::vlb(&m);
        assert!(a.scalar_mul(1).unwrap().equals(&a));
        let zero = a.scalar_mul(0).unwrap();
        match &zero {
            CompressedMatrix::Sm(s) => assert_eq!(s.width(), 1),
            _ => unreachable!(),
        }
        assert_eq!(zero.decompress(), DenseMatrix::zeros(2, 2).unwrap());
        assert!(matches!(
            a.scalar_mul(u64::MAX),
            Err(Error::ArithmeticOverflow { row: 0, col: 0 })
        ));
    }

    #[test]
    fn matmul_small() {
        let a = CompressedMatrix::sm(&dm(&[[1, 2], [3, 4]]));
        let b = CompressedMatrix::vlb(&dm(&[[5, 6], [7, 8]]));
        assert_eq!(a.matmul(&b).unwrap().decompress(), dm(&[[19, 22], [43, 50]]));
        let id = CompressedMatrix::sm(&DenseMatrix::identity(2).unwrap());
        assert!(id.matmul(&b).unwrap().equals(&b));
        assert!(matches!(
            a.matmul(&CompressedMatrix::sm(&dm(&[[1, 2, 3]]))),
            Err(Error::ShapeMismatch(_))
        ));
        let big = CompressedMatrix::sm(&dm(&[[1u64 << 32, 1u64 << 32]]));
        let col = CompressedMatrix::sm(&dm(&[[1u64 << 32], [1]]));
        assert!(matches!(big.matmul(&col), Err(Error::ArithmeticOverflow { .. })));
        // accumulation overflow with no single overflowing product
        let a = CompressedMatrix::sm(&dm(&[[1, 1]]));
        let b = CompressedMatrix::sm(&dm(&[[u64::MAX], [1]]));
        assert!(matches!(a.matmul(&b), Err(Error::ArithmeticOverflow { row: 0, col: 0 })));
    }

    #[test]
    fn transpose_cases() {
        let row = dm(&[[900, 1023, 721, 256, 1, 10, 700, 20]]);
        let t = CompressedMatrix::vlb(&row).transpose().unwrap();
        assert_eq!((t.rows(), t.cols()), (8, 1));
        assert_eq!(t.iter().collect::<Vec<_>>(), row.as_slice());
        let one = CompressedMatrix::sm(&dm(&[[42]]));
        assert!(one.transpose().unwrap().equals(&one));
    }

    #[test]
    fn equality_across_representations() {
        let m = DenseMatrix::from_fn(7, 9, |i, j| (i * 31 + j * 7) as u64).unwrap();
        let variants = [
            CompressedMatrix::compress(&m, Method::Sm, Order::RowMajor),
            CompressedMatrix::compress(&m, Method::Sm, Order::ColMajor),
            CompressedMatrix::compress(&m, Method::Vlb, Order::RowMajor),
            CompressedMatrix::compress(&m, Method::Vlb, Order::ColMajor),
        ];
        for a in &variants {
            for b in &variants {
                assert_eq!(a, b);
            }
        }
        let ones = CompressedMatrix::sm(&DenseMatrix::from_fn(7, 9, |_, _| 1).unwrap());
        assert_ne!(variants[0], variants[2].add(&ones).unwrap());
        assert_ne!(variants[0], variants[0].transpose().unwrap());
    }
}
