use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("value {value} does not fit in a {width}-bit field")]
    FieldOverflow { value: u64, width: u32 },

    #[error("field width {0} is outside 1..=64")]
    InvalidWidth(u32),

    #[error("index out of bounds: {what}")]
    OutOfBounds { what: String },

    #[error("value {value} needs {needed} bits but the matrix stores {width}-bit chunks")]
    WidthOverflow { value: u64, needed: u32, width: u32 },

    #[error("cannot narrow chunk width from {from} to {to}")]
    NarrowingRequested { from: u32, to: u32 },

    #[error("corrupt bit stream: {0}")]
    CorruptStream(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("arithmetic overflow at ({row}, {col})")]
    ArithmeticOverflow { row: usize, col: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("bad magic: expected \"CCM1\", found {0:?}")]
    BadMagic([u8; 4]),

    #[error("unsupported container version {0}")]
    UnsupportedVersion(u8),

    #[error("truncated payload: {0}")]
    TruncatedPayload(String),

    #[error("invalid container: {0}")]
    InvalidContainer(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn oob(what: impl Into<String>) -> Self {
        Error::OutOfBounds { what: what.into() }
    }

    pub(crate) fn corrupt(msg: impl Into<String>) -> Self {
        Error::CorruptStream(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// Process exit code used by the `ccm` binary: 3 for I/O failures, 2 for
    /// everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 3,
            Error::Csv(e) if e.is_io_error() => 3,
            _ => 2,
        }
    }
}
