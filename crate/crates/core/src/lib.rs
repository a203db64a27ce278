//! Lossless bit packing for non-negative integer matrices, with element access
//! and arithmetic directly on the packed form.
//!
//! Two layouts are provided:
//!
//! - [`SmMatrix`]: every element is stored in a fixed chunk of
//!   `bit_length(max)` bits. Constant-time random access and in-place updates.
//! - [`VlbMatrix`]: every element is stored as a `k`-bit length prefix followed
//!   by exactly as many payload bits as the element needs, with
//!   `k = bit_length(bit_length(max))`. Sequential decode plus checkpointed seek.
//!
//! [`CompressedMatrix`] wraps either layout and implements addition, scalar
//! multiplication, matrix product and transpose without decompressing its
//! operands. The [`efficiency`] module computes the fraction of bits saved
//! relative to plain 64-bit storage, both from formulas and from real buffers,
//! and [`genmat`] draws random bit-length distributions for experiments.
//!
//! ```
//! use ccmatrix::{CompressedMatrix, DenseMatrix};
//!
//! let m = DenseMatrix::from_rows(&[[900u64, 1023, 721, 256, 1, 10, 700, 20]]).unwrap();
//! let sm = CompressedMatrix::sm(&m);
//! let vlb = CompressedMatrix::vlb(&m);
//! assert_eq!(sm.bits_used(), 80);
//! assert_eq!(vlb.bits_used(), 91);
//! assert_eq!(sm.get(0, 6).unwrap(), 700);
//! assert!(sm.equals(&vlb));
//! ```

pub mod bitstream;
pub mod cli;
pub mod cmatrix;
pub mod efficiency;
pub mod error;
pub mod genmat;
pub mod matrix;
pub mod sm;
pub mod vlb;

pub use bitstream::{bit_length, BitBuffer};
pub use cmatrix::{CompressedMatrix, Method};
pub use efficiency::{EfficiencyReport, Eta, Histogram};
pub use error::{Error, Result};
pub use genmat::{BitLengthDist, KPolicy};
pub use matrix::{DenseMatrix, Order};
pub use sm::SmMatrix;
pub use vlb::VlbMatrix;
