//! Fixed-width packing: layout, random access and in-place updates.

use ccmatrix::{DenseMatrix, Order, SmMatrix};

fn main() -> ccmatrix::Result<()> {
    let row = DenseMatrix::from_rows(&[[900u64, 1023, 721, 256, 1, 10, 700, 20]])?;
    let sm = SmMatrix::compress(&row, Order::RowMajor);

    println!("width {} bits, {} bits used, {} words", sm.width(), sm.bits_used(), sm.data().word_count());
    for (i, w) in sm.data().words().iter().enumerate() {
        println!("word{i} = {w:#066b}");
    }

    // 700 straddles the word boundary: low 4 bits in word0, high 6 in word1.
    println!("element (0,6) = {}", sm.get(0, 6)?);

    let mut sm = sm;
    sm.set(0, 4, 1000)?;
    println!("after set: {:?}", sm.iter().collect::<Vec<_>>());

    match sm.set(0, 0, 5000) {
        Err(e) => println!("rejected: {e}"),
        Ok(()) => unreachable!(),
    }
    let mut wide = sm.widen(13)?;
    wide.set(0, 0, 5000)?;
    println!("widened to {} bits: {:?}", wide.width(), wide.iter().collect::<Vec<_>>());

    let m = DenseMatrix::from_fn(4, 3, |i, j| (i * 3 + j) as u64)?;
    let col = SmMatrix::compress(&m, Order::ColMajor);
    println!("column-major 4x3, width {}:\n{}", col.width(), col.decompress());
    Ok(())
}
