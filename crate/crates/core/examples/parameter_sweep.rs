//! Coarse sweep over Beta-mixture parameters counting where each layout wins.

use ccmatrix::cli::sweep::{run_sweep, SweepMode, SweepSpec};

fn main() -> ccmatrix::Result<()> {
    let spec = SweepSpec {
        step: 16.0,
        sample_size: 2_000,
        ..SweepSpec::default()
    };
    let res = run_sweep(&spec)?;
    println!(
        "mixture grid {} points: fixed width wins {} ({:.3}%)",
        res.points.len(),
        res.sm_favored(),
        res.sm_share_percent()
    );

    let single = SweepSpec {
        mode: SweepMode::Single,
        sample_size: 5_000,
        ..SweepSpec::default()
    };
    let res = run_sweep(&single)?;
    let best = res.points.iter().max_by(|a, b| a.d().total_cmp(&b.d())).unwrap();
    let worst = res.points.iter().min_by(|a, b| a.d().total_cmp(&b.d())).unwrap();
    println!("single Beta grid {} points", res.points.len());
    println!("  largest D = {:+.4} at {} (mean b {:.2})", best.d(), best.dist, best.mean_bitlen);
    println!("  smallest D = {:+.4} at {} (mean b {:.2})", worst.d(), worst.dist, worst.mean_bitlen);
    Ok(())
}
