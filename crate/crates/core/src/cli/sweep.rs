//! Grid sweep over Beta mixture parameters comparing the two packings.
//!
//! Each grid point draws `sample_size` bit lengths and evaluates
//! `eta1 = (64 - max) / 64` and `eta2` of the sample's histogram. A point
//! favours fixed-width packing when `eta1 >= eta2`.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::genmat::{evaluate_counts, rng_from_seed, stream_seed, BitLengthDist, KPolicy};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepMode {
    /// Grid over `(alpha1, beta1, alpha2, beta2)` with weight `w`.
    Mixture,
    /// Grid over `(alpha, beta)`; both components identical.
    Single,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub mode: SweepMode,
    pub start: f64,
    pub end: f64,
    pub step: f64,
    pub w: f64,
    pub sample_size: usize,
    pub seed: u64,
    pub k_policy: KPolicy,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            mode: SweepMode::Mixture,
            start: 1.0,
            end: 64.0,
            step: 4.0,
            w: 0.5,
            sample_size: 10_000,
            seed: 42,
            k_policy: KPolicy::Fixed7,
        }
    }
}

impl SweepSpec {
    /// Parameter values `start, start + step, ...` not exceeding `end`.
    pub fn axis(&self) -> Result<Vec<f64>> {
        if !(self.step > 0.0 && self.start > 0.0 && self.end >= self.start) {
            return Err(Error::invalid(format!(
                "sweep range needs 0 < start <= end and step > 0, got {}..{} step {}",
                self.start, self.end, self.step
            )));
        }
        let n = ((self.end - self.start) / self.step + 1e-9).floor() as usize + 1;
        Ok((0..n).map(|i| self.start + i as f64 * self.step).collect())
    }

    pub fn points(&self) -> Result<Vec<BitLengthDist>> {
        let axis = self.axis()?;
        let mut out = Vec::new();
        match self.mode {
            SweepMode::Mixture => {
                for &alpha1 in &axis {
                    for &beta1 in &axis {
                        for &alpha2 in &axis {
                            for &beta2 in &axis {
                                out.push(BitLengthDist::BetaMixture {
                                    alpha1,
                                    beta1,
                                    alpha2,
                                    beta2,
                                    w: self.w,
                                });
                            }
                        }
                    }
                }
            }
            SweepMode::Single => {
                for &alpha in &axis {
                    for &beta in &axis {
                        out.push(BitLengthDist::beta(alpha, beta));
                    }
                }
            }
        }
        Ok(out)
    }

    fn describe(&self, points: usize) -> String {
        let mode = match self.mode {
            SweepMode::Mixture => "mixture",
            SweepMode::Single => "single",
        };
        let k = match self.k_policy {
            KPolicy::Fixed7 => "fixed7",
            KPolicy::Derived => "derived",
        };
        format!(
            "# sweep mode={mode} start={} end={} step={} w={} sample_size={} seed={} k={k} points={points}",
            self.start, self.end, self.step, self.w, self.sample_size, self.seed
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepPoint {
    pub dist: BitLengthDist,
    pub mean_bitlen: f64,
    pub max_bitlen: u32,
    pub eta1: f64,
    pub eta2: f64,
}

impl SweepPoint {
    pub fn d(&self) -> f64 {
        self.eta1 - self.eta2
    }

    pub fn sm_favored(&self) -> bool {
        self.eta1 >= self.eta2
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub points: Vec<SweepPoint>,
}

impl SweepResult {
    pub fn sm_favored(&self) -> usize {
        self.points.iter().filter(|p| p.sm_favored()).count()
    }

    /// Share of grid points favouring fixed-width packing, in percent.
    pub fn sm_share_percent(&self) -> f64 {
        100.0 * self.sm_favored() as f64 / self.points.len() as f64
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{}", self.spec.describe(self.points.len()))?;
        let mut csv = csv::Writer::from_writer(&mut out);
        csv.write_record(["alpha1", "beta1", "alpha2", "beta2", "w", "mean_bitlen", "max_bitlen", "eta1", "eta2", "d", "sm_favored"])?;
        for p in &self.points {
            let BitLengthDist::BetaMixture {
                alpha1,
                beta1,
                alpha2,
                beta2,
                w,
            } = p.dist
            else {
                unreachable!("sweep points are beta mixtures")
            };
            csv.write_record([
                alpha1.to_string(),
                beta1.to_string(),
                alpha2.to_string(),
                beta2.to_string(),
                w.to_string(),
                p.mean_bitlen.to_string(),
                p.max_bitlen.to_string(),
                p.eta1.to_string(),
                p.eta2.to_string(),
                p.d().to_string(),
                (p.sm_favored() as u8).to_string(),
            ])?;
        }
        csv.flush()?;
        drop(csv);
        writeln!(
            out,
            "# sm_favored={} vlb_favored={} total={} sm_share_percent={}",
            self.sm_favored(),
            self.points.len() - self.sm_favored(),
            self.points.len(),
            self.sm_share_percent()
        )?;
        Ok(())
    }
}

/// Runs every grid point; point `i` draws from stream `seed ^ i`.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    if spec.sample_size == 0 {
        return Err(Error::invalid("sample size must be at least 1"));
    }
    let dists = spec.points()?;
    let samplers = dists.iter().map(|d| d.sampler()).collect::<Result<Vec<_>>>()?;
    let points = dists
        .par_iter()
        .zip(samplers.par_iter())
        .enumerate()
        .map(|(i, (dist, sampler))| {
            let mut rng = rng_from_seed(stream_seed(spec.seed, i as u64));
            let e = evaluate_counts(&sampler.counts(&mut rng, spec.sample_size), spec.k_policy);
            SweepPoint {
                dist: *dist,
                mean_bitlen: e.mean_bitlen,
                max_bitlen: e.max_bitlen,
                eta1: e.eta1,
                eta2: e.eta2,
            }
        })
        .collect();
    Ok(SweepResult {
        spec: spec.clone(),
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_axis_has_16_values() {
        let axis = SweepSpec::default().axis().unwrap();
        assert_eq!(axis.len(), 16);
        assert_eq!((axis[0], axis[1], axis[15]), (1.0, 5.0, 61.0));
        assert_eq!(SweepSpec::default().points().unwrap().len(), 65_536);
        let single = SweepSpec {
            mode: SweepMode::Single,
            ..SweepSpec::default()
        };
        assert_eq!(single.points().unwrap().len(), 256);
    }

    #[test]
    fn small_sweep_is_deterministic() {
        let spec = SweepSpec {
            mode: SweepMode::Single,
            step: 20.0,
            sample_size: 500,
            ..SweepSpec::default()
        };
        let a = run_sweep(&spec).unwrap();
        let b = run_sweep(&spec).unwrap();
        let mut csv_a = Vec::new();
        let mut csv_b = Vec::new();
        a.write_csv(&mut csv_a).unwrap();
        b.write_csv(&mut csv_b).unwrap();
        assert_eq!(csv_a, csv_b);
        let text = String::from_utf8(csv_a).unwrap();
        assert!(text.starts_with("# sweep mode=single"));
        assert_eq!(text.lines().count(), 1 + 1 + 16 + 1);
    }

    #[test]
    fn rejects_bad_range() {
        let spec = SweepSpec {
            step: 0.0,
            ..SweepSpec::default()
        };
        assert!(run_sweep(&spec).is_err());
    }
}
