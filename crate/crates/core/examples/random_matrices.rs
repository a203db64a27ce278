//! Random matrices with prescribed bit-length distributions.

use ccmatrix::cli::experiment::{run_experiment, ExperimentSpec};
use ccmatrix::efficiency::measure;
use ccmatrix::genmat::{mixture_moments, sample_matrix};
use ccmatrix::{BitLengthDist, CompressedMatrix};

fn main() -> ccmatrix::Result<()> {
    let dists = [
        BitLengthDist::Uniform { a: 1, b: 64 },
        BitLengthDist::Binomial { n: 64, p: 0.5 },
        BitLengthDist::PoissonTrunc { lambda: 16.0 },
        BitLengthDist::BetaMixture {
            alpha1: 2.0,
            beta1: 9.0,
            alpha2: 9.0,
            beta2: 2.0,
            w: 0.8,
        },
    ];
    println!("{:<56} {:>8} {:>8} {:>8}", "distribution", "mean b", "eta1", "eta2");
    for (i, d) in dists.iter().enumerate() {
        let m = sample_matrix(d, 300, 300, i as u64)?;
        let sm = measure(&CompressedMatrix::sm(&m));
        let vlb = measure(&CompressedMatrix::vlb(&m));
        println!("{:<56} {:>8.3} {:>8.4} {:>8.4}", d.to_string(), d.mean(), sm.eta_f64(), vlb.eta_f64());
    }

    let mm = mixture_moments(2.0, 9.0, 9.0, 2.0, 0.8)?;
    println!("\nbeta mixture on [0,1]: mean {:.4}, variance {:.4}", mm.mean, mm.variance);

    let spec = ExperimentSpec::table(4, vec![100, 10_000], 50, 1)?;
    println!("\nbinomial preset, 50 replicates:");
    for r in run_experiment(&spec)? {
        println!("  n={:<3} size={:<6} eta2 = {:.4} +- {:.4}", r.param, r.size, r.eta2_mean, r.eta2_sd);
    }
    Ok(())
}
