//! File-level commands: each takes paths or writers and returns a report the
//! binary prints.

use std::fmt;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::cli::container;
use crate::cli::experiment::{
    constant_bitlen_comparison, run_experiment, write_constant_csv, write_experiment_csv, ExperimentSpec,
};
use crate::cli::sweep::{run_sweep, SweepResult, SweepSpec};
use crate::cli::text::{format_matrix, parse_matrix};
use crate::cmatrix::{CompressedMatrix, Method};
use crate::efficiency::{measure, EfficiencyReport};
use crate::error::Result;
use crate::matrix::Order;
use crate::sm::SmMatrix;
use crate::vlb::VlbMatrix;

#[derive(Clone, Debug, PartialEq)]
pub struct CompressReport {
    pub rows: usize,
    pub cols: usize,
    pub method: Method,
    pub bits_used: u64,
    pub eta: f64,
}

impl fmt::Display for CompressReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let method = match self.method {
            Method::Sm => "sm",
            Method::Vlb => "vlb",
        };
        write!(
            f,
            "dims: {}x{}\nmethod: {method}\nbits used: {}\neta: {}",
            self.rows, self.cols, self.bits_used, self.eta
        )
    }
}

/// Parses a text matrix, packs it and writes a container. `stride` only
/// affects the in-memory checkpoints of length-prefixed packing; it is not
/// stored.
pub fn cmd_compress(input: &Path, method: Method, order: Order, stride: usize, output: &Path) -> Result<CompressReport> {
    let text = fs::read_to_string(input)?;
    let dense = parse_matrix(&text)?;
    let m: CompressedMatrix = match method {
        Method::Sm => SmMatrix::compress(&dense, order).into(),
        Method::Vlb => VlbMatrix::compress(&dense, order, stride)?.into(),
    };
    container::save(&m, output)?;
    let report = measure(&m);
    Ok(CompressReport {
        rows: m.rows(),
        cols: m.cols(),
        method,
        bits_used: report.bits_used,
        eta: report.eta_f64(),
    })
}

pub fn cmd_decompress(input: &Path, output: &Path) -> Result<()> {
    let m = container::load(input)?;
    fs::write(output, format_matrix(&m.decompress()))?;
    Ok(())
}

pub fn cmd_info(input: &Path) -> Result<EfficiencyReport> {
    Ok(measure(&container::load(input)?))
}

fn open_csv(path: &Path) -> Result<BufWriter<fs::File>> {
    Ok(BufWriter::new(fs::File::create(path)?))
}

pub fn cmd_experiment(spec: &ExperimentSpec, csv_out: &Path) -> Result<()> {
    let records = run_experiment(spec)?;
    let mut out = open_csv(csv_out)?;
    write_experiment_csv(spec, &records, &mut out)?;
    out.flush()?;
    Ok(())
}

pub fn cmd_constant_comparison(rows: usize, cols: usize, seed: u64, csv_out: &Path) -> Result<()> {
    let records = constant_bitlen_comparison(rows, cols, seed)?;
    let mut out = open_csv(csv_out)?;
    write_constant_csv(&records, &mut out)?;
    out.flush()?;
    Ok(())
}

pub fn cmd_sweep(spec: &SweepSpec, csv_out: &Path) -> Result<SweepResult> {
    let result = run_sweep(spec)?;
    let mut out = open_csv(csv_out)?;
    result.write_csv(&mut out)?;
    out.flush()?;
    Ok(result)
}
