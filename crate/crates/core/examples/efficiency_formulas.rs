//! Efficiency of both layouts from formulas and from packed buffers.

use ccmatrix::efficiency::{eta1, eta2, eta2_prob, expected_eta2, measure, solve_two_point, to_f64, WORST_CASE_K};
use ccmatrix::{CompressedMatrix, DenseMatrix, Histogram};

fn main() -> ccmatrix::Result<()> {
    let row = DenseMatrix::from_rows(&[[900u64, 1023, 721, 256, 1, 10, 700, 20]])?;
    print!("{}", measure(&CompressedMatrix::sm(&row)));
    print!("{}", measure(&CompressedMatrix::vlb(&row)));

    println!("\nhalf 1-bit, half 64-bit, k = 7:");
    println!("  p1   p2   eta2");
    for i in 0..=10 {
        let p1 = i as f64 / 10.0;
        let e = eta2_prob(&[(1, p1), (64, 1.0 - p1)], WORST_CASE_K)?;
        println!("  {p1:.1}  {:.1}  {e:+.4}", 1.0 - p1);
    }

    let s = solve_two_point(0.0, 1, 64, WORST_CASE_K)?;
    println!("\nbreak-even mix of 1 and 64 bits: p1 = {:.4}, p2 = {:.4}", s.p1, s.p2);

    let groups: Histogram = [1, 8, 16, 24, 32, 40, 48, 56, 64].iter().map(|&b| (b, 1)).collect();
    println!("nine equal groups: eta2 = {:.5}", to_f64(eta2(&groups, WORST_CASE_K)?));
    println!("uniform 1..64 expectation: eta2 = {:.5}", expected_eta2(32.5, WORST_CASE_K));

    println!("\n b   eta1     eta2(k=b(b))");
    for b in [1u32, 2, 8, 16, 33, 63, 64] {
        let h: Histogram = [(b, 1)].into();
        let e2 = eta2(&h, ccmatrix::bit_length(b as u64))?;
        println!("{b:>2}   {:.5}  {:.5}", to_f64(eta1(b)), to_f64(e2));
    }
    Ok(())
}
