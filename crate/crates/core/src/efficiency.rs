//! Compression efficiency: `(bits allocated - bits used) / bits allocated`,
//! with 64 bits allocated per element.
//!
//! Whenever the inputs are integral (bit lengths, frequencies) the result is an
//! exact [`Eta`] rational; conversion to `f64` happens only at the edge.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use num_traits::ToPrimitive;

use crate::bitstream::{bit_length, WORD_BITS};
use crate::cmatrix::{CompressedMatrix, Method};
use crate::error::{Error, Result};

pub type Eta = Ratio<i128>;

/// Bit length -> number of elements with that bit length.
pub type Histogram = BTreeMap<u32, u64>;

/// Prefix width used for distribution-level analyses: enough to store 64.
pub const WORST_CASE_K: u32 = 7;

const W: i128 = WORD_BITS as i128;

/// Fixed-width efficiency for chunk width `max_bitlen`.
pub fn eta1(max_bitlen: u32) -> Eta {
    Eta::new(W - max_bitlen as i128, W)
}

/// Expected fixed-width efficiency when the greatest element has bit length
/// `max_bitlen` (64 in the worst case). Same value as [`eta1`].
pub fn expected_eta1(max_bitlen: u32) -> Eta {
    eta1(max_bitlen)
}

/// Length-prefixed efficiency of a bit-length histogram with prefix width `k`.
pub fn eta2(histogram: &Histogram, k: u32) -> Result<Eta> {
    let n: i128 = histogram.values().map(|&f| f as i128).sum();
    if n == 0 {
        return Err(Error::invalid("empty bit-length histogram"));
    }
    let used: i128 = histogram
        .iter()
        .map(|(&b, &f)| (b as i128 + k as i128) * f as i128)
        .sum();
    Ok(Eta::new(W * n - used, W * n))
}

/// Length-prefixed efficiency from bit-length probabilities.
pub fn eta2_prob(probs: &[(u32, f64)], k: u32) -> Result<f64> {
    let total: f64 = probs.iter().map(|&(_, p)| p).sum();
    if probs.iter().any(|&(_, p)| !(0.0..=1.0).contains(&p)) || (total - 1.0).abs() > 1e-12 {
        return Err(Error::invalid(format!("probabilities must sum to 1, got {total}")));
    }
    let mean: f64 = probs.iter().map(|&(b, p)| b as f64 * p).sum();
    Ok(expected_eta2(mean, k))
}

/// Expected length-prefixed efficiency for a mean bit length.
pub fn expected_eta2(mean_bitlen: f64, k: u32) -> f64 {
    1.0 - mean_bitlen / 64.0 - k as f64 / 64.0
}

/// `eta1 - eta2`; positive favours fixed-width packing.
pub fn compare(histogram: &Histogram, max_bitlen: u32, k: u32) -> Result<Eta> {
    Ok(eta1(max_bitlen) - eta2(histogram, k)?)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoPointSolveResult {
    pub p1: f64,
    pub p2: f64,
    pub feasible: bool,
}

/// Probabilities `(p1, p2)` of bit lengths `b1`, `b2` that give the target
/// length-prefixed efficiency.
pub fn solve_two_point(target_eta2: f64, b1: u32, b2: u32, k: u32) -> Result<TwoPointSolveResult> {
    solve_two_point_mean(64.0 * (1.0 - target_eta2) - k as f64, b1, b2)
}

/// Solves `p1 + p2 = 1`, `b1 p1 + b2 p2 = mean_bitlen`.
pub fn solve_two_point_mean(mean_bitlen: f64, b1: u32, b2: u32) -> Result<TwoPointSolveResult> {
    if b1 == b2 {
        return Err(Error::invalid("two-point solve needs distinct bit lengths"));
    }
    let (b1, b2) = (b1 as f64, b2 as f64);
    let p2 = (mean_bitlen - b1) / (b2 - b1);
    let p1 = 1.0 - p2;
    let unit = -1e-12..=1.0 + 1e-12;
    Ok(TwoPointSolveResult {
        p1,
        p2,
        feasible: unit.contains(&p1) && unit.contains(&p2),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EfficiencyReport {
    pub method: Method,
    pub rows: usize,
    pub cols: usize,
    pub bits_allocated: u64,
    pub bits_used: u64,
    pub eta: Eta,
    pub histogram: Histogram,
    /// Chunk width for fixed-width packing.
    pub width: Option<u32>,
    /// Prefix width for length-prefixed packing.
    pub k: Option<u32>,
}

impl EfficiencyReport {
    pub fn eta_f64(&self) -> f64 {
        to_f64(self.eta)
    }
}

/// Bit-length histogram of the elements.
pub fn histogram(m: &CompressedMatrix) -> Histogram {
    let mut hist = Histogram::new();
    for v in m.iter() {
        *hist.entry(bit_length(v)).or_default() += 1;
    }
    hist
}

/// Efficiency measured from the actual packed buffer.
pub fn measure(m: &CompressedMatrix) -> EfficiencyReport {
    let bits_allocated = m.len() as u64 * 64;
    let bits_used = m.bits_used() as u64;
    let (width, k) = match m {
        CompressedMatrix::Sm(s) => (Some(s.width()), None),
        CompressedMatrix::Vlb(v) => (None, Some(v.k())),
    };
    EfficiencyReport {
        method: m.method(),
        rows: m.rows(),
        cols: m.cols(),
        bits_allocated,
        bits_used,
        eta: Eta::new(
            bits_allocated as i128 - bits_used as i128,
            bits_allocated as i128,
        ),
        histogram: histogram(m),
        width,
        k,
    }
}

pub fn to_f64(eta: Eta) -> f64 {
    eta.to_f64().expect("finite ratio")
}

impl fmt::Display for EfficiencyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let method = match self.method {
            Method::Sm => "sm",
            Method::Vlb => "vlb",
        };
        writeln!(f, "dims: {}x{}", self.rows, self.cols)?;
        writeln!(f, "method: {method}")?;
        if let Some(w) = self.width {
            writeln!(f, "width: {w}")?;
        }
        if let Some(k) = self.k {
            writeln!(f, "k: {k}")?;
        }
        writeln!(f, "bits allocated: {}", self.bits_allocated)?;
        writeln!(f, "bits used: {}", self.bits_used)?;
        writeln!(f, "eta: {} ({})", self.eta_f64(), self.eta)?;
        writeln!(f, "histogram (bit length: count):")?;
        for (b, n) in &self.histogram {
            writeln!(f, "  {b}: {n}")?;
        }
        Ok(())
    }
}
