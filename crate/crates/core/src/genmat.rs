//! Random bit lengths and random matrices with prescribed bit lengths.
//!
//! All randomness comes from [`ChaCha8Rng`] seeded with a `u64`. Independent
//! streams (replicates, grid points) use `seed ^ stream_index`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Binomial, Distribution, Poisson};
use rayon::prelude::*;
use statrs::function::beta::beta_reg;
use statrs::function::gamma::ln_gamma;

use crate::bitstream::bit_length;
use crate::efficiency::{eta1, eta2, to_f64, Histogram, WORST_CASE_K};
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

pub const MAX_BITLEN: u32 = 64;

/// Distribution of element bit lengths.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BitLengthDist {
    /// `w * Beta(alpha1, beta1) + (1 - w) * Beta(alpha2, beta2)` mapped to
    /// `1..=64` by `floor(64 x) + 1`.
    BetaMixture {
        alpha1: f64,
        beta1: f64,
        alpha2: f64,
        beta2: f64,
        w: f64,
    },
    /// Discrete uniform on `a..=b`.
    Uniform { a: u32, b: u32 },
    /// Raw binomial draws, so 0 is possible.
    Binomial { n: u32, p: f64 },
    /// Poisson conditioned on `<= 64` (rejection), 0 possible.
    PoissonTrunc { lambda: f64 },
    Constant(u32),
    /// `b1` with probability `p1`, else `b2`.
    TwoPoint { b1: u32, b2: u32, p1: f64 },
}

impl BitLengthDist {
    pub fn beta(alpha: f64, beta: f64) -> Self {
        BitLengthDist::BetaMixture {
            alpha1: alpha,
            beta1: beta,
            alpha2: alpha,
            beta2: beta,
            w: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::invalid(msg));
        match *self {
            BitLengthDist::BetaMixture {
                alpha1,
                beta1,
                alpha2,
                beta2,
                w,
            } => {
                if [alpha1, beta1, alpha2, beta2].iter().any(|&x| !(x > 0.0 && x.is_finite())) {
                    return bad(format!("beta parameters must be positive: {self}"));
                }
                if !(0.0..=1.0).contains(&w) {
                    return bad(format!("mixture weight {w} outside [0, 1]"));
                }
            }
            BitLengthDist::Uniform { a, b } => {
                if !(1 <= a && a <= b && b <= MAX_BITLEN) {
                    return bad(format!("uniform bounds need 1 <= a <= b <= 64, got {a}, {b}"));
                }
            }
            BitLengthDist::Binomial { n, p } => {
                if !(1..=MAX_BITLEN).contains(&n) || !(0.0..=1.0).contains(&p) {
                    return bad(format!("binomial needs n in 1..=64 and p in [0, 1]: {self}"));
                }
            }
            BitLengthDist::PoissonTrunc { lambda } => {
                if !(lambda > 0.0 && lambda.is_finite()) {
                    return bad(format!("poisson rate must be positive, got {lambda}"));
                }
            }
            BitLengthDist::Constant(b) => {
                if !(1..=MAX_BITLEN).contains(&b) {
                    return bad(format!("constant bit length {b} outside 1..=64"));
                }
            }
            BitLengthDist::TwoPoint { b1, b2, p1 } => {
                if !(1..=MAX_BITLEN).contains(&b1) || !(1..=MAX_BITLEN).contains(&b2) {
                    return bad(format!("two-point bit lengths outside 1..=64: {self}"));
                }
                if !(0.0..=1.0).contains(&p1) {
                    return bad(format!("two-point probability {p1} outside [0, 1]"));
                }
            }
        }
        Ok(())
    }

    pub fn sampler(&self) -> Result<BitLengthSampler> {
        self.validate()?;
        let inner = match *self {
            BitLengthDist::BetaMixture {
                alpha1,
                beta1,
                alpha2,
                beta2,
                w,
            } => SamplerKind::Mixture {
                w,
                first: Beta::new(alpha1, beta1).map_err(|e| Error::invalid(e.to_string()))?,
                second: Beta::new(alpha2, beta2).map_err(|e| Error::invalid(e.to_string()))?,
            },
            BitLengthDist::Uniform { a, b } => SamplerKind::Uniform(a, b),
            BitLengthDist::Binomial { n, p } => {
                SamplerKind::Binomial(Binomial::new(n as u64, p).map_err(|e| Error::invalid(e.to_string()))?)
            }
            BitLengthDist::PoissonTrunc { lambda } => {
                if poisson_cdf(lambda, MAX_BITLEN) < 1e-9 {
                    return Err(Error::invalid(format!(
                        "poisson rate {lambda} puts almost no mass at or below 64"
                    )));
                }
                SamplerKind::Poisson(Poisson::new(lambda).map_err(|e| Error::invalid(e.to_string()))?)
            }
            BitLengthDist::Constant(b) => SamplerKind::Constant(b),
            BitLengthDist::TwoPoint { b1, b2, p1 } => SamplerKind::TwoPoint { b1, b2, p1 },
        };
        Ok(BitLengthSampler { inner })
    }

    /// Exact expected bit length.
    pub fn mean(&self) -> f64 {
        match *self {
            BitLengthDist::BetaMixture { .. } => {
                // E[floor(64x) + 1] has no closed form; sum the transformed pmf
                let pmf = self.beta_mixture_pmf();
                pmf.iter().enumerate().map(|(i, p)| (i + 1) as f64 * p).sum()
            }
            BitLengthDist::Uniform { a, b } => (a + b) as f64 / 2.0,
            BitLengthDist::Binomial { n, p } => n as f64 * p,
            BitLengthDist::PoissonTrunc { lambda } => {
                let pmf = truncated_poisson_pmf(lambda);
                pmf.iter().enumerate().map(|(x, p)| x as f64 * p).sum()
            }
            BitLengthDist::Constant(b) => b as f64,
            BitLengthDist::TwoPoint { b1, b2, p1 } => b1 as f64 * p1 + b2 as f64 * (1.0 - p1),
        }
    }

    /// Probability of each bit length `1..=64` after the transform.
    fn beta_mixture_pmf(&self) -> Vec<f64> {
        let BitLengthDist::BetaMixture {
            alpha1,
            beta1,
            alpha2,
            beta2,
            w,
        } = *self
        else {
            return Vec::new();
        };
        let cdf = |x: f64| w * beta_reg(alpha1, beta1, x) + (1.0 - w) * beta_reg(alpha2, beta2, x);
        (0..64)
            .map(|bin| cdf((bin + 1) as f64 / 64.0) - cdf(bin as f64 / 64.0))
            .collect()
    }
}

impl fmt::Display for BitLengthDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            BitLengthDist::BetaMixture {
                alpha1,
                beta1,
                alpha2,
                beta2,
                w,
            } => write!(
                f,
                "beta-mixture(alpha1={alpha1},beta1={beta1},alpha2={alpha2},beta2={beta2},w={w})"
            ),
            BitLengthDist::Uniform { a, b } => write!(f, "uniform(a={a},b={b})"),
            BitLengthDist::Binomial { n, p } => write!(f, "binomial(n={n},p={p})"),
            BitLengthDist::PoissonTrunc { lambda } => write!(f, "poisson(lambda={lambda},max=64)"),
            BitLengthDist::Constant(b) => write!(f, "constant(b={b})"),
            BitLengthDist::TwoPoint { b1, b2, p1 } => write!(f, "two-point(b1={b1},b2={b2},p1={p1})"),
        }
    }
}

fn poisson_ln_pmf(lambda: f64, x: u32) -> f64 {
    x as f64 * lambda.ln() - lambda - ln_gamma(x as f64 + 1.0)
}

fn poisson_cdf(lambda: f64, max: u32) -> f64 {
    (0..=max).map(|x| poisson_ln_pmf(lambda, x).exp()).sum()
}

fn truncated_poisson_pmf(lambda: f64) -> Vec<f64> {
    let raw: Vec<f64> = (0..=MAX_BITLEN).map(|x| poisson_ln_pmf(lambda, x).exp()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|p| p / total).collect()
}

/// Maps a `[0, 1]` draw to a bit length in `1..=64`; `x = 1` is clamped to 64.
#[inline]
pub fn beta_to_bitlen(x: f64) -> u32 {
    ((64.0 * x).floor() as u32 + 1).min(MAX_BITLEN)
}

#[derive(Clone, Debug)]
enum SamplerKind {
    Mixture { w: f64, first: Beta<f64>, second: Beta<f64> },
    Uniform(u32, u32),
    Binomial(Binomial),
    Poisson(Poisson<f64>),
    Constant(u32),
    TwoPoint { b1: u32, b2: u32, p1: f64 },
}

/// A validated [`BitLengthDist`] ready to draw from.
#[derive(Clone, Debug)]
pub struct BitLengthSampler {
    inner: SamplerKind,
}

impl BitLengthSampler {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        match &self.inner {
            SamplerKind::Mixture { w, first, second } => {
                let x = if rng.random::<f64>() < *w {
                    first.sample(rng)
                } else {
                    second.sample(rng)
                };
                beta_to_bitlen(x)
            }
            SamplerKind::Uniform(a, b) => rng.random_range(*a..=*b),
            SamplerKind::Binomial(d) => d.sample(rng) as u32,
            SamplerKind::Poisson(d) => loop {
                let x = d.sample(rng);
                if x <= MAX_BITLEN as f64 {
                    break x as u32;
                }
            },
            SamplerKind::Constant(b) => *b,
            SamplerKind::TwoPoint { b1, b2, p1 } => {
                if rng.random::<f64>() < *p1 {
                    *b1
                } else {
                    *b2
                }
            }
        }
    }

    /// Counts of each bit length `0..=64` over `n` draws.
    pub fn counts<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> [u64; 65] {
        let mut counts = [0u64; 65];
        for _ in 0..n {
            counts[self.sample(rng) as usize] += 1;
        }
        counts
    }
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed of independent stream `index` derived from `seed`.
#[inline]
pub fn stream_seed(seed: u64, index: u64) -> u64 {
    seed ^ index
}

pub fn sample_bitlens(d: &BitLengthDist, n: usize, seed: u64) -> Result<Vec<u32>> {
    if n == 0 {
        return Err(Error::invalid("sample size must be at least 1"));
    }
    let sampler = d.sampler()?;
    let mut rng = rng_from_seed(seed);
    Ok((0..n).map(|_| sampler.sample(&mut rng)).collect())
}

/// A value whose bit length is exactly `bitlen`; 0 maps to the value 0.
pub fn sample_value<R: Rng + ?Sized>(bitlen: u32, rng: &mut R) -> u64 {
    match bitlen {
        0 => 0,
        1 => rng.random_range(0..=1),
        b => {
            let lo = 1u64 << (b - 1);
            let hi = if b == 64 { u64::MAX } else { (1u64 << b) - 1 };
            rng.random_range(lo..=hi)
        }
    }
}

pub fn sample_matrix(d: &BitLengthDist, rows: usize, cols: usize, seed: u64) -> Result<DenseMatrix> {
    let sampler = d.sampler()?;
    let mut rng = rng_from_seed(seed);
    DenseMatrix::from_fn(rows, cols, |_, _| {
        let b = sampler.sample(&mut rng);
        sample_value(b, &mut rng)
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixtureMoments {
    pub mean: f64,
    pub variance: f64,
}

/// Mean and variance of a two-component Beta mixture on `[0, 1]`.
pub fn mixture_moments(alpha1: f64, beta1: f64, alpha2: f64, beta2: f64, w: f64) -> Result<MixtureMoments> {
    BitLengthDist::BetaMixture {
        alpha1,
        beta1,
        alpha2,
        beta2,
        w,
    }
    .validate()?;
    let moments = |a: f64, b: f64| {
        let s = a + b;
        (a / s, a * b / (s * s * (s + 1.0)))
    };
    let (m1, v1) = moments(alpha1, beta1);
    let (m2, v2) = moments(alpha2, beta2);
    Ok(MixtureMoments {
        mean: w * m1 + (1.0 - w) * m2,
        variance: w * v1 + (1.0 - w) * v2 + w * (1.0 - w) * (m1 - m2).powi(2),
    })
}

/// How the prefix width is chosen when evaluating sampled bit lengths.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum KPolicy {
    /// Always 7, enough for any 64-bit value.
    #[default]
    Fixed7,
    /// `bit_length` of the largest sampled bit length.
    Derived,
}

impl KPolicy {
    pub fn k(self, max_bitlen: u32) -> u32 {
        match self {
            KPolicy::Fixed7 => WORST_CASE_K,
            KPolicy::Derived => bit_length(max_bitlen as u64),
        }
    }
}

/// Efficiencies of one sample of bit lengths.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleEfficiency {
    pub mean_bitlen: f64,
    pub max_bitlen: u32,
    pub eta1: f64,
    pub eta2: f64,
}

/// Evaluates a bit-length count table (index = bit length).
pub fn evaluate_counts(counts: &[u64; 65], k_policy: KPolicy) -> SampleEfficiency {
    let hist: Histogram = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(b, &c)| (b as u32, c))
        .collect();
    let n: u64 = hist.values().sum();
    let max_bitlen = hist.keys().next_back().copied().unwrap_or(0);
    let total: u64 = hist.iter().map(|(&b, &c)| b as u64 * c).sum();
    let k = k_policy.k(max_bitlen);
    SampleEfficiency {
        mean_bitlen: total as f64 / n as f64,
        max_bitlen,
        // a zero bit length still needs a one-bit chunk
        eta1: to_f64(eta1(max_bitlen.max(1))),
        eta2: to_f64(eta2(&hist, k).expect("non-empty sample")),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReplicateSummary {
    pub size: usize,
    pub replicates: usize,
    pub eta2_mean: f64,
    pub eta2_sd: f64,
    pub eta1_mean: f64,
    pub eta1_sd: f64,
}

/// Mean and sample standard deviation of the efficiencies over `reps`
/// independent samples of `size` bit lengths, with `k = 7`.
pub fn replicate_efficiency(d: &BitLengthDist, size: usize, reps: usize, seed: u64) -> Result<ReplicateSummary> {
    replicate_efficiency_with(d, size, reps, seed, KPolicy::Fixed7)
}

pub fn replicate_efficiency_with(
    d: &BitLengthDist,
    size: usize,
    reps: usize,
    seed: u64,
    k_policy: KPolicy,
) -> Result<ReplicateSummary> {
    if size == 0 || reps == 0 {
        return Err(Error::invalid("size and replicates must be at least 1"));
    }
    let sampler = d.sampler()?;
    let results: Vec<SampleEfficiency> = (0..reps as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng_from_seed(stream_seed(seed, r));
            evaluate_counts(&sampler.counts(&mut rng, size), k_policy)
        })
        .collect();
    let (eta2_mean, eta2_sd) = mean_sd(results.iter().map(|e| e.eta2));
    let (eta1_mean, eta1_sd) = mean_sd(results.iter().map(|e| e.eta1));
    Ok(ReplicateSummary {
        size,
        replicates: reps,
        eta2_mean,
        eta2_sd,
        eta1_mean,
        eta1_sd,
    })
}

/// Mean and sample (n - 1) standard deviation; the deviation is 0 for one value.
pub fn mean_sd(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.clone().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let ss: f64 = values.map(|x| (x - mean).powi(2)).sum();
    (mean, (ss / (n - 1) as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_samples() {
        assert_eq!(sample_bitlens(&BitLengthDist::Constant(10), 8, 1).unwrap(), vec![10; 8]);
    }

    #[test]
    fn transform_edges() {
        assert_eq!(beta_to_bitlen(0.0), 1);
        assert_eq!(beta_to_bitlen(0.999), 64);
        assert_eq!(beta_to_bitlen(1.0), 64);
        assert_eq!(beta_to_bitlen(0.5), 33);
    }

    #[test]
    fn determinism() {
        let d = BitLengthDist::BetaMixture {
            alpha1: 2.0,
            beta1: 5.0,
            alpha2: 9.0,
            beta2: 1.0,
            w: 0.3,
        };
        let a = sample_bitlens(&d, 1000, 99).unwrap();
        assert_eq!(a, sample_bitlens(&d, 1000, 99).unwrap());
        assert_ne!(a, sample_bitlens(&d, 1000, 100).unwrap());
        assert!(a.iter().all(|b| (1..=64).contains(b)));
        let s1 = replicate_efficiency(&d, 500, 20, 5).unwrap();
        assert_eq!(s1, replicate_efficiency(&d, 500, 20, 5).unwrap());
    }

    #[test]
    fn ranges() {
        let u = sample_bitlens(&BitLengthDist::Uniform { a: 3, b: 9 }, 5000, 2).unwrap();
        assert!(u.iter().all(|b| (3..=9).contains(b)));
        assert_eq!((*u.iter().min().unwrap(), *u.iter().max().unwrap()), (3, 9));
        let bin = sample_bitlens(&BitLengthDist::Binomial { n: 4, p: 0.5 }, 5000, 3).unwrap();
        assert!(bin.contains(&0) && bin.iter().all(|&b| b <= 4));
        let p = sample_bitlens(&BitLengthDist::PoissonTrunc { lambda: 60.0 }, 5000, 4).unwrap();
        assert!(p.iter().all(|&b| b <= 64));
    }

    #[test]
    fn invalid_parameters() {
        let bad = [
            BitLengthDist::Uniform { a: 0, b: 5 },
            BitLengthDist::Uniform { a: 6, b: 5 },
            BitLengthDist::Binomial { n: 65, p: 0.5 },
            BitLengthDist::PoissonTrunc { lambda: 0.0 },
            BitLengthDist::PoissonTrunc { lambda: 1000.0 },
            BitLengthDist::Constant(0),
            BitLengthDist::TwoPoint { b1: 1, b2: 64, p1: 1.5 },
            BitLengthDist::beta(-1.0, 1.0),
        ];
        for d in bad {
            assert!(d.sampler().is_err(), "{d}");
        }
    }

    #[test]
    fn value_bit_lengths() {
        let mut rng = rng_from_seed(8);
        for b in 0..=64 {
            for _ in 0..50 {
                let v = sample_value(b, &mut rng);
                assert_eq!(bit_length(v), b.max(1));
                if b == 0 {
                    assert_eq!(v, 0);
                }
            }
        }
    }

    #[test]
    fn matrix_ranges() {
        let ones = sample_matrix(&BitLengthDist::Constant(1), 8, 8, 1).unwrap();
        assert!(ones.as_slice().iter().all(|&v| v <= 1));
        let tens = sample_matrix(&BitLengthDist::Constant(10), 9, 7, 1).unwrap();
        assert!(tens.as_slice().iter().all(|v| (512..=1023).contains(v)));
    }

    #[test]
    fn degenerate_mixture_moments() {
        let single = mixture_moments(2.0, 3.0, 7.0, 1.0, 0.0).unwrap();
        let b = mixture_moments(7.0, 1.0, 7.0, 1.0, 0.5).unwrap();
        assert!((single.mean - 7.0 / 8.0).abs() < 1e-15);
        assert!((single.variance - 7.0 / (64.0 * 9.0)).abs() < 1e-15);
        assert!((b.mean - single.mean).abs() < 1e-15 && (b.variance - single.variance).abs() < 1e-15);
        assert!(mixture_moments(1.0, 1.0, 1.0, 1.0, 1.5).is_err());
    }

    #[test]
    fn analytic_means() {
        assert_eq!(BitLengthDist::Uniform { a: 1, b: 64 }.mean(), 32.5);
        // scipy: sum(x * pmf(x), x <= 64) / cdf(64) for lambda = 32
        let truncated = BitLengthDist::PoissonTrunc { lambda: 32.0 }.mean();
        assert!((truncated - 31.999_993_178_052_72).abs() < 1e-9, "{truncated}");
        let flat = BitLengthDist::beta(1.0, 1.0).mean();
        assert!((flat - 32.5).abs() < 1e-9, "{flat}");
    }

    #[test]
    fn mean_sd_basics() {
        assert_eq!(mean_sd([2.0].into_iter()), (2.0, 0.0));
        let (m, s) = mean_sd([1.0, 2.0, 3.0, 4.0].into_iter());
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }
}
