//! `CCM1` container: a fixed 32-byte little-endian header followed by the
//! packed words.
//!
//! ```text
//! offset size field
//!      0    4 magic "CCM1"
//!      4    1 version (1)
//!      5    1 method (1 = fixed width, 2 = length prefixed)
//!      6    1 order (0 = row major, 1 = column major)
//!      7    8 rows (u64 LE)
//!     15    8 cols (u64 LE)
//!     23    1 param (chunk width, or prefix width k)
//!     24    8 word_count (u64 LE)
//!     32  8*n words (u64 LE)
//! ```
//!
//! Checkpoints of length-prefixed matrices are not stored; they are rebuilt
//! on load.

use std::fs::File;
use std::io::{BufReader, BufWriter, ErrorKind, Read, Write};
use std::path::Path;

use crate::bitstream::BitBuffer;
use crate::cmatrix::{CompressedMatrix, Method};
use crate::error::{Error, Result};
use crate::matrix::Order;
use crate::sm::SmMatrix;
use crate::vlb::{VlbMatrix, DEFAULT_STRIDE};

pub const MAGIC: [u8; 4] = *b"CCM1";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ContainerHeader {
    pub method: Method,
    pub order: Order,
    pub rows: u64,
    pub cols: u64,
    pub param: u8,
    pub word_count: u64,
}

impl ContainerHeader {
    pub fn of(m: &CompressedMatrix) -> Self {
        let (param, word_count) = match m {
            CompressedMatrix::Sm(s) => (s.width() as u8, s.data().word_count()),
            CompressedMatrix::Vlb(v) => (v.k() as u8, v.data().word_count()),
        };
        Self {
            method: m.method(),
            order: m.order(),
            rows: m.rows() as u64,
            cols: m.cols() as u64,
            param,
            word_count: word_count as u64,
        }
    }

    pub fn to_bytes(&self) -> [u8; HEADER_LEN] {
        let mut b = [0u8; HEADER_LEN];
        b[0..4].copy_from_slice(&MAGIC);
        b[4] = VERSION;
        b[5] = self.method.code();
        b[6] = self.order.code();
        b[7..15].copy_from_slice(&self.rows.to_le_bytes());
        b[15..23].copy_from_slice(&self.cols.to_le_bytes());
        b[23] = self.param;
        b[24..32].copy_from_slice(&self.word_count.to_le_bytes());
        b
    }

    pub fn from_bytes(b: &[u8; HEADER_LEN]) -> Result<Self> {
        let magic: [u8; 4] = b[0..4].try_into().unwrap();
        if magic != MAGIC {
            return Err(Error::BadMagic(magic));
        }
        if b[4] != VERSION {
            return Err(Error::UnsupportedVersion(b[4]));
        }
        let method = Method::from_code(b[5])
            .ok_or_else(|| Error::InvalidContainer(format!("unknown method code {}", b[5])))?;
        let order = Order::from_code(b[6])
            .ok_or_else(|| Error::InvalidContainer(format!("unknown order code {}", b[6])))?;
        let u64_at = |at: usize| u64::from_le_bytes(b[at..at + 8].try_into().unwrap());
        Ok(Self {
            method,
            order,
            rows: u64_at(7),
            cols: u64_at(15),
            param: b[23],
            word_count: u64_at(24),
        })
    }
}

pub fn write_container<W: Write>(m: &CompressedMatrix, mut out: W) -> Result<()> {
    out.write_all(&ContainerHeader::of(m).to_bytes())?;
    let words = match m {
        CompressedMatrix::Sm(s) => s.data().words(),
        CompressedMatrix::Vlb(v) => v.data().words(),
    };
    for w in words {
        out.write_all(&w.to_le_bytes())?;
    }
    out.flush()?;
    Ok(())
}

fn read_exact_or<R: Read>(input: &mut R, buf: &mut [u8], what: &str) -> Result<()> {
    input.read_exact(buf).map_err(|e| match e.kind() {
        ErrorKind::UnexpectedEof => Error::TruncatedPayload(what.to_string()),
        _ => Error::Io(e),
    })
}

pub fn read_container<R: Read>(mut input: R) -> Result<CompressedMatrix> {
    let mut head = [0u8; HEADER_LEN];
    // a short file is reported as bad magic when even the magic is missing
    let mut got = 0;
    while got < HEADER_LEN {
        match input.read(&mut head[got..])? {
            0 => break,
            n => got += n,
        }
    }
    if got < 4 || head[0..4] != MAGIC {
        let mut magic = [0u8; 4];
        magic[..got.min(4)].copy_from_slice(&head[..got.min(4)]);
        return Err(Error::BadMagic(magic));
    }
    if got < HEADER_LEN {
        return Err(Error::TruncatedPayload(format!("header is {got} of {HEADER_LEN} bytes")));
    }
    let header = ContainerHeader::from_bytes(&head)?;
    let rows = usize::try_from(header.rows).map_err(|_| Error::InvalidContainer("row count too large".into()))?;
    let cols = usize::try_from(header.cols).map_err(|_| Error::InvalidContainer("column count too large".into()))?;
    crate::matrix::check_shape(rows, cols).map_err(|e| Error::InvalidContainer(e.to_string()))?;
    let param = header.param as u32;

    // upper bound on the payload the header can legitimately describe
    let max_words = match header.method {
        Method::Sm => (rows * cols * param.min(64) as usize).div_ceil(64),
        Method::Vlb => (rows * cols * (param.min(7) as usize + 64)).div_ceil(64),
    };
    if header.word_count > max_words as u64 {
        return Err(Error::InvalidContainer(format!(
            "word count {} exceeds what a {rows}x{cols} matrix can use",
            header.word_count
        )));
    }
    let word_count = header.word_count as usize;
    let mut words = Vec::with_capacity(word_count);
    let mut buf = [0u8; 8];
    for i in 0..word_count {
        read_exact_or(&mut input, &mut buf, &format!("payload ends after {i} of {word_count} words"))?;
        words.push(u64::from_le_bytes(buf));
    }
    if input.read(&mut buf[..1])? != 0 {
        return Err(Error::InvalidContainer("trailing bytes after payload".into()));
    }

    let matrix = match header.method {
        Method::Sm => {
            let bits = rows * cols * param as usize;
            if !(1..=64).contains(&param) {
                return Err(Error::InvalidContainer(format!("chunk width {param} outside 1..=64")));
            }
            if words.len() != bits.div_ceil(64) {
                return Err(Error::TruncatedPayload(format!(
                    "{} words stored, {} needed",
                    words.len(),
                    bits.div_ceil(64)
                )));
            }
            let data = BitBuffer::from_words(words, bits)?;
            SmMatrix::from_parts(rows, cols, param, header.order, data)?.into()
        }
        Method::Vlb => {
            let bits = words.len() * 64;
            let data = BitBuffer::from_words(words, bits)?;
            let v = VlbMatrix::from_parts(rows, cols, param, header.order, data, DEFAULT_STRIDE)
                .map_err(|e| match e {
                    Error::CorruptStream(msg) if msg.contains("past the end") => Error::TruncatedPayload(msg),
                    other => other,
                })?;
            if v.data().word_count() != word_count {
                return Err(Error::InvalidContainer("payload has extra zero words".into()));
            }
            v.into()
        }
    };
    Ok(matrix)
}

pub fn save(m: &CompressedMatrix, path: &Path) -> Result<()> {
    write_container(m, BufWriter::new(File::create(path)?))
}

pub fn load(path: &Path) -> Result<CompressedMatrix> {
    read_container(BufReader::new(File::open(path)?))
}
