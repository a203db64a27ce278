//! Replicated efficiency experiments and their CSV output.

use std::io::Write;

use crate::bitstream::bit_length;
use crate::cmatrix::CompressedMatrix;
use crate::efficiency::{eta1, eta2, measure, to_f64, Histogram};
use crate::error::{Error, Result};
use crate::genmat::{replicate_efficiency_with, sample_matrix, BitLengthDist, KPolicy};

pub const DEFAULT_SIZES: [usize; 3] = [100, 10_000, 1_000_000];
pub const DEFAULT_REPLICATES: usize = 1000;

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRow {
    /// Value of the varied parameter (maximum, trials or rate).
    pub param: f64,
    pub dist: BitLengthDist,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub name: String,
    pub rows: Vec<ExperimentRow>,
    pub sizes: Vec<usize>,
    pub replicates: usize,
    pub seed: u64,
    pub k_policy: KPolicy,
}

impl ExperimentSpec {
    pub fn single(dist: BitLengthDist, sizes: Vec<usize>, replicates: usize, seed: u64) -> Self {
        Self {
            name: "custom".into(),
            rows: vec![ExperimentRow {
                param: dist.mean(),
                dist,
            }],
            sizes,
            replicates,
            seed,
            k_policy: KPolicy::Fixed7,
        }
    }

    /// Presets for the uniform (3), binomial (4) and truncated Poisson (5)
    /// bit-length tables.
    pub fn table(table: u32, sizes: Vec<usize>, replicates: usize, seed: u64) -> Result<Self> {
        let rows: Vec<ExperimentRow> = match table {
            3 => [1u32, 8, 16, 32, 64]
                .iter()
                .map(|&n| ExperimentRow {
                    param: n as f64,
                    dist: BitLengthDist::Uniform { a: 1, b: n },
                })
                .collect(),
            4 => [1u32, 8, 16, 32, 64]
                .iter()
                .map(|&n| ExperimentRow {
                    param: n as f64,
                    dist: BitLengthDist::Binomial { n, p: 0.5 },
                })
                .collect(),
            5 => [1.0, 8.0, 16.0, 32.0]
                .iter()
                .map(|&lambda| ExperimentRow {
                    param: lambda,
                    dist: BitLengthDist::PoissonTrunc { lambda },
                })
                .collect(),
            other => return Err(Error::invalid(format!("no table preset {other}; use 3, 4 or 5"))),
        };
        Ok(Self {
            name: format!("table{table}"),
            rows,
            sizes,
            replicates,
            seed,
            k_policy: KPolicy::Fixed7,
        })
    }

    /// Seed of cell `index` (row-major over rows x sizes). Replicate `r` of the
    /// cell then uses `cell_seed ^ r`.
    pub fn cell_seed(&self, index: usize) -> u64 {
        self.seed ^ ((index as u64) << 32)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRecord {
    pub param: f64,
    pub dist: BitLengthDist,
    pub size: usize,
    pub replicates: usize,
    pub seed: u64,
    pub eta2_mean: f64,
    pub eta2_sd: f64,
    pub eta1_mean: f64,
    pub eta1_sd: f64,
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<ExperimentRecord>> {
    if spec.replicates == 0 {
        return Err(Error::invalid("replicates must be at least 1"));
    }
    if spec.sizes.is_empty() || spec.rows.is_empty() {
        return Err(Error::invalid("experiment needs at least one size and one row"));
    }
    let mut out = Vec::with_capacity(spec.rows.len() * spec.sizes.len());
    for (r, row) in spec.rows.iter().enumerate() {
        for (s, &size) in spec.sizes.iter().enumerate() {
            let seed = spec.cell_seed(r * spec.sizes.len() + s);
            let summary = replicate_efficiency_with(&row.dist, size, spec.replicates, seed, spec.k_policy)?;
            out.push(ExperimentRecord {
                param: row.param,
                dist: row.dist,
                size,
                replicates: spec.replicates,
                seed,
                eta2_mean: summary.eta2_mean,
                eta2_sd: summary.eta2_sd,
                eta1_mean: summary.eta1_mean,
                eta1_sd: summary.eta1_sd,
            });
        }
    }
    Ok(out)
}

pub fn write_experiment_csv<W: Write>(spec: &ExperimentSpec, records: &[ExperimentRecord], mut out: W) -> Result<()> {
    let k = match spec.k_policy {
        KPolicy::Fixed7 => "fixed7",
        KPolicy::Derived => "derived",
    };
    writeln!(
        out,
        "# experiment={} replicates={} seed={} k={k}",
        spec.name, spec.replicates, spec.seed
    )?;
    let mut csv = csv::Writer::from_writer(out);
    csv.write_record(["param", "distribution", "size", "replicates", "seed", "eta2_mean", "eta2_sd", "eta1_mean", "eta1_sd"])?;
    for r in records {
        csv.write_record([
            r.param.to_string(),
            r.dist.to_string(),
            r.size.to_string(),
            r.replicates.to_string(),
            r.seed.to_string(),
            r.eta2_mean.to_string(),
            r.eta2_sd.to_string(),
            r.eta1_mean.to_string(),
            r.eta1_sd.to_string(),
        ])?;
    }
    csv.flush()?;
    Ok(())
}

/// Fixed-width vs length-prefixed efficiency when every element has the same
/// bit length `b`, from the formulas and from packed random matrices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstantBitLengthRecord {
    pub bitlen: u32,
    pub eta1: f64,
    pub eta2: f64,
    pub d: f64,
    pub eta1_measured: f64,
    pub eta2_measured: f64,
}

pub fn constant_bitlen_comparison(rows: usize, cols: usize, seed: u64) -> Result<Vec<ConstantBitLengthRecord>> {
    (1..=64u32)
        .map(|b| {
            let hist: Histogram = [(b, (rows * cols) as u64)].into();
            let k = bit_length(b as u64);
            let e1 = eta1(b);
            let e2 = eta2(&hist, k)?;
            let m = sample_matrix(&BitLengthDist::Constant(b), rows, cols, seed ^ b as u64)?;
            let sm = measure(&CompressedMatrix::sm(&m));
            let vlb = measure(&CompressedMatrix::vlb(&m));
            Ok(ConstantBitLengthRecord {
                bitlen: b,
                eta1: to_f64(e1),
                eta2: to_f64(e2),
                d: to_f64(e1 - e2),
                eta1_measured: sm.eta_f64(),
                eta2_measured: vlb.eta_f64(),
            })
        })
        .collect()
}

pub fn write_constant_csv<W: Write>(records: &[ConstantBitLengthRecord], mut out: W) -> Result<()> {
    writeln!(out, "# constant bit-length comparison")?;
    let mut csv = csv::Writer::from_writer(out);
    csv.write_record(["bitlen", "eta1", "eta2", "d", "eta1_measured", "eta2_measured"])?;
    for r in records {
        csv.write_record([
            r.bitlen.to_string(),
            r.eta1.to_string(),
            r.eta2.to_string(),
            r.d.to_string(),
            r.eta1_measured.to_string(),
            r.eta2_measured.to_string(),
        ])?;
    }
    csv.flush()?;
    Ok(())
}
