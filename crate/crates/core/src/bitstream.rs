//! Growable bit buffer made of 64-bit words.
//!
//! Bit position `p` lives in word `p / 64` at bit `p % 64`, where bit 0 is the
//! least significant bit. Fields are written low bit first, so a field that
//! crosses a word boundary keeps its low-order segment in the earlier word and
//! its high-order segment at the bottom of the next one.

use crate::error::{Error, Result};

pub const WORD_BITS: usize = 64;

/// Number of binary digits needed to write `n`, with `bit_length(0) == 1`.
#[inline]
pub fn bit_length(n: u64) -> u32 {
    if n <= 1 {
        1
    } else {
        64 - n.leading_zeros()
    }
}

#[inline]
pub(crate) fn low_mask(width: u32) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// A sequence of 64-bit words addressed by absolute bit position.
///
/// Bits at positions `>= bit_len` are always zero, so two buffers holding the
/// same fields compare equal word for word.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BitBuffer {
    words: Vec<u64>,
    bit_len: usize,
}

impl BitBuffer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        Self {
            words: Vec::with_capacity(words_for(bits)),
            bit_len: 0,
        }
    }

    /// A zero-filled buffer of exactly `bit_len` bits.
    pub fn zeroed(bit_len: usize) -> Self {
        Self {
            words: vec![0; words_for(bit_len)],
            bit_len,
        }
    }

    /// Rebuilds a buffer from raw words, checking that the word count matches
    /// `bit_len` and that the padding above `bit_len` is zero.
    pub fn from_words(words: Vec<u64>, bit_len: usize) -> Result<Self> {
        if words.len() != words_for(bit_len) {
            return Err(Error::corrupt(format!(
                "{} words cannot hold exactly {bit_len} bits",
                words.len()
            )));
        }
        let buf = Self { words, bit_len };
        if !buf.padding_is_zero() {
            return Err(Error::corrupt("nonzero padding after the last field"));
        }
        Ok(buf)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn into_words(self) -> Vec<u64> {
        self.words
    }

    pub fn bit_len(&self) -> usize {
        self.bit_len
    }

    pub fn word_count(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bit_len == 0
    }

    fn padding_is_zero(&self) -> bool {
        let used = self.bit_len % WORD_BITS;
        match self.words.last() {
            Some(&last) if used != 0 => last & !low_mask(used as u32) == 0,
            _ => true,
        }
    }

    /// Shrinks the valid length to `bit_len`. Fails if any dropped bit is set.
    pub fn truncate(&mut self, bit_len: usize) -> Result<()> {
        if bit_len > self.bit_len {
            return Err(Error::oob(format!(
                "truncate to {bit_len} bits exceeds length {}",
                self.bit_len
            )));
        }
        let keep = words_for(bit_len);
        if self.words[keep..].iter().any(|&w| w != 0) {
            return Err(Error::corrupt("nonzero bits after the last field"));
        }
        self.words.truncate(keep);
        let old = self.bit_len;
        self.bit_len = bit_len;
        if !self.padding_is_zero() {
            self.bit_len = old;
            return Err(Error::corrupt("nonzero bits after the last field"));
        }
        Ok(())
    }

    /// Writes the low `width` bits of `value` at `pos`, growing the buffer when
    /// the field ends past the current length.
    pub fn write_field(&mut self, pos: usize, width: u32, value: u64) -> Result<()> {
        check_width(width)?;
        if width < 64 && value >> width != 0 {
            return Err(Error::FieldOverflow { value, width });
        }
        let end = pos + width as usize;
        if end > self.bit_len {
            let need = words_for(end);
            if need > self.words.len() {
                self.words.resize(need, 0);
            }
            self.bit_len = end;
        }

        let word = pos / WORD_BITS;
        let offset = (pos % WORD_BITS) as u32;
        let mask = low_mask(width);
        self.words[word] = (self.words[word] & !(mask << offset)) | (value << offset);

        let spill = offset + width;
        if spill > 64 {
            // high segment continues at bit 0 of the next word
            let hi_width = spill - 64;
            let hi_mask = low_mask(hi_width);
            let next = &mut self.words[word + 1];
            *next = (*next & !hi_mask) | (value >> (64 - offset));
        }
        Ok(())
    }

    /// Appends a field at the current end; returns the position it was written at.
    pub fn push_field(&mut self, width: u32, value: u64) -> Result<usize> {
        let pos = self.bit_len;
        self.write_field(pos, width, value)?;
        Ok(pos)
    }

    pub fn read_field(&self, pos: usize, width: u32) -> Result<u64> {
        check_width(width)?;
        if pos + width as usize > self.bit_len {
            return Err(Error::oob(format!(
                "field [{pos}, {}) past bit length {}",
                pos + width as usize,
                self.bit_len
            )));
        }
        Ok(self.read_unchecked(pos, width))
    }

    /// Caller guarantees `1 <= width <= 64` and `pos + width <= bit_len`.
    #[inline]
    pub(crate) fn read_unchecked(&self, pos: usize, width: u32) -> u64 {
        let word = pos / WORD_BITS;
        let offset = (pos % WORD_BITS) as u32;
        let mut value = self.words[word] >> offset;
        if offset + width > 64 {
            value |= self.words[word + 1] << (64 - offset);
        }
        value & low_mask(width)
    }

    /// Reads a single bit.
    pub fn bit(&self, pos: usize) -> Result<bool> {
        self.read_field(pos, 1).map(|b| b == 1)
    }
}

fn check_width(width: u32) -> Result<()> {
    if (1..=64).contains(&width) {
        Ok(())
    } else {
        Err(Error::InvalidWidth(width))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Bit-at-a-time reference writer, independent of the word arithmetic.
    #[derive(Default)]
    struct BitOracle {
        bits: Vec<bool>,
    }

    impl BitOracle {
        fn write(&mut self, pos: usize, width: u32, value: u64) {
            let end = pos + width as usize;
            if self.bits.len() < end {
                self.bits.resize(end, false);
            }
            for i in 0..width as usize {
                self.bits[pos + i] = (value >> i) & 1 == 1;
            }
        }

        fn words(&self) -> Vec<u64> {
            self.bits
                .chunks(64)
                .map(|chunk| {
                    chunk
                        .iter()
                        .enumerate()
                        .fold(0u64, |w, (i, &b)| w | ((b as u64) << i))
                })
                .collect()
        }
    }

    fn sample_buffer() -> BitBuffer {
        let mut buf = BitBuffer::new();
        buf.write_field(0, 10, 900).unwrap();
        buf.write_field(60, 10, 700).unwrap();
        buf.write_field(70, 10, 20).unwrap();
        buf
    }

    #[test]
    fn first_field_sits_in_low_bits() {
        let mut buf = BitBuffer::new();
        buf.write_field(0, 10, 900).unwrap();
        assert_eq!(buf.words()[0], 0b1110000100);
        assert_eq!(buf.bit_len(), 10);
    }

    #[test]
    fn zero_write_only_extends_length() {
        let mut buf = BitBuffer::new();
        buf.write_field(0, 64, 0).unwrap();
        assert_eq!(buf.words(), &[0]);
        assert_eq!(buf.bit_len(), 64);
    }

    #[test]
    fn straddling_field_splits_low_segment_first() {
        let buf = sample_buffer();
        assert_eq!(buf.words()[0] >> 60, 0b1100);
        assert_eq!(buf.words()[1] & 0b111111, 0b101011);
        assert_eq!(buf.read_field(0, 10).unwrap(), 900);
        assert_eq!(buf.read_field(60, 10).unwrap(), 700);
        assert_eq!(buf.read_field(70, 10).unwrap(), 20);
    }

    #[test]
    fn zero_buffer_reads_zero() {
        let buf = BitBuffer::zeroed(200);
        for width in 1..=64 {
            assert_eq!(buf.read_field(200 - width as usize, width).unwrap(), 0);
            assert_eq!(buf.read_field(37, width).unwrap(), 0);
        }
    }

    #[test]
    fn overflow_and_bounds_errors() {
        let mut buf = BitBuffer::new();
        assert!(matches!(
            buf.write_field(0, 10, 1024),
            Err(Error::FieldOverflow { value: 1024, width: 10 })
        ));
        assert!(matches!(buf.write_field(0, 0, 0), Err(Error::InvalidWidth(0))));
        assert!(matches!(buf.write_field(0, 65, 0), Err(Error::InvalidWidth(65))));
        buf.write_field(0, 64, u64::MAX).unwrap();
        assert!(matches!(buf.read_field(1, 64), Err(Error::OutOfBounds { .. })));
        assert_eq!(buf.read_field(0, 64).unwrap(), u64::MAX);
    }

    #[test]
    fn bit_length_examples() {
        assert_eq!(bit_length(1023), 10);
        assert_eq!(bit_length(256), 9);
        assert_eq!(bit_length(0), 1);
        assert_eq!(bit_length(1), 1);
        assert_eq!(bit_length(1 << 63), 64);
        assert_eq!(bit_length(u64::MAX), 64);
    }

    #[test]
    fn bit_length_matches_binary_formatting() {
        let check = |n: u64| {
            assert_eq!(bit_length(n) as usize, format!("{n:b}").len(), "n = {n}");
            // smallest w >= 1 with n < 2^w
            let w = bit_length(n);
            assert!(w == 64 || (n as u128) < (1u128 << w));
            assert!(w == 1 || (n as u128) >= (1u128 << (w - 1)));
        };
        (0..1u64 << 16).for_each(check);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let shift = rng.random_range(0..64);
            check(rng.random::<u64>() >> shift);
        }
    }

    #[test]
    fn truncate_rejects_set_bits() {
        let mut buf = BitBuffer::zeroed(128);
        buf.write_field(100, 1, 1).unwrap();
        assert!(buf.truncate(90).is_err());
        assert_eq!(buf.bit_len(), 128);
        buf.truncate(101).unwrap();
        assert_eq!(buf.word_count(), 2);
        assert!(BitBuffer::from_words(vec![1 << 20], 20).is_err());
        assert!(BitBuffer::from_words(vec![1 << 19], 20).is_ok());
        assert!(BitBuffer::from_words(vec![0, 0], 20).is_err());
    }

    #[test]
    fn word_ops_match_bit_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xB17);
        for _ in 0..10_000 {
            let mut buf = BitBuffer::new();
            let mut oracle = BitOracle::default();
            for _ in 0..rng.random_range(1..12) {
                let width = rng.random_range(1..=64u32);
                let pos = rng.random_range(0..300);
                let value = rng.random::<u64>() & low_mask(width);
                buf.write_field(pos, width, value).unwrap();
                oracle.write(pos, width, value);
            }
            assert_eq!(buf.words(), oracle.words().as_slice());
            assert_eq!(buf.bit_len(), oracle.bits.len());
        }
    }

    fn disjoint_fields() -> impl Strategy<Value = Vec<(usize, u32, u64)>> {
        prop::collection::vec((0usize..40, 1u32..=64, any::<u64>()), 1..20).prop_map(|raw| {
            let mut pos = 0;
            raw.into_iter()
                .map(|(gap, width, v)| {
                    pos += gap;
                    let field = (pos, width, v & low_mask(width));
                    pos += width as usize;
                    field
                })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn roundtrip_disjoint_writes(fields in disjoint_fields()) {
            let mut buf = BitBuffer::new();
            for &(pos, width, value) in &fields {
                buf.write_field(pos, width, value).unwrap();
            }
            for &(pos, width, value) in &fields {
                prop_assert_eq!(buf.read_field(pos, width).unwrap(), value);
            }
        }

        #[test]
        fn disjoint_writes_commute(fields in disjoint_fields(), seed in any::<u64>()) {
            let mut forward = BitBuffer::new();
            for &(pos, width, value) in &fields {
                forward.write_field(pos, width, value).unwrap();
            }
            let mut shuffled = fields.clone();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for i in (1..shuffled.len()).rev() {
                shuffled.swap(i, rng.random_range(0..=i));
            }
            let mut other = BitBuffer::new();
            for &(pos, width, value) in &shuffled {
                other.write_field(pos, width, value).unwrap();
            }
            prop_assert_eq!(forward, other);
        }
    }
}
