//! Length-prefixed packing with checkpointed seeks.

use ccmatrix::genmat::sample_matrix;
use ccmatrix::vlb::DEFAULT_STRIDE;
use ccmatrix::{bit_length, BitLengthDist, DenseMatrix, Order, VlbMatrix};

fn main() -> ccmatrix::Result<()> {
    let row = DenseMatrix::from_rows(&[[900u64, 1023, 721, 256, 1, 10, 700, 20]])?;
    let vlb = VlbMatrix::compress(&row, Order::RowMajor, DEFAULT_STRIDE)?;
    println!("prefix width k = {}, {} bits used", vlb.k(), vlb.bits_used());
    for v in vlb.iter() {
        println!("  {v:>5}: {} + {} bits", vlb.k(), bit_length(v));
    }

    // Mostly small values with a few wide ones.
    let dist = BitLengthDist::TwoPoint { b1: 3, b2: 60, p1: 0.9 };
    let m = sample_matrix(&dist, 200, 200, 7)?;
    let vlb = VlbMatrix::compress(&m, Order::RowMajor, 256)?;
    println!(
        "200x200 sample: {} bits vs {} dense, {} checkpoints",
        vlb.bits_used(),
        64 * m.len(),
        vlb.checkpoints().count()
    );

    let idx = 31_337;
    let tail: Vec<u64> = vlb.iter_from(idx).take(4).collect();
    println!("elements {idx}.. = {tail:?}");
    assert_eq!(tail[0], m.as_slice()[idx]);
    println!("get(150, 42) = {}", vlb.get(150, 42)?);
    Ok(())
}
