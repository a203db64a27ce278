//! Arithmetic on packed operands, with checked overflow.

use ccmatrix::{CompressedMatrix, DenseMatrix, Error};

fn main() -> ccmatrix::Result<()> {
    let a = DenseMatrix::from_rows(&[[1u64, 2, 3], [4, 5, 6]])?;
    let b = DenseMatrix::from_rows(&[[7u64, 8], [9, 10], [11, 12]])?;
    let ca = CompressedMatrix::sm(&a);
    let cb = CompressedMatrix::vlb(&b);

    let prod = ca.matmul(&cb)?;
    println!("a * b =\n{}", prod.decompress());
    println!("a^T =\n{}", ca.transpose()?.decompress());
    println!("3a =\n{}", ca.scalar_mul(3)?.decompress());
    println!("a + a =\n{}", ca.add(&ca)?.decompress());

    let big = CompressedMatrix::sm(&DenseMatrix::from_rows(&[[u64::MAX]])?);
    match big.add(&big) {
        Err(e @ Error::ArithmeticOverflow { .. }) => println!("overflow detected: {e}"),
        other => panic!("expected overflow, got {other:?}"),
    }
    Ok(())
}
