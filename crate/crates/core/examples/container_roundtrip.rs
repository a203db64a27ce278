//! Saving packed matrices to the CCM1 container format and loading them back.

use ccmatrix::cli::container::{read_container, write_container, HEADER_LEN};
use ccmatrix::cli::text::parse_matrix;
use ccmatrix::{CompressedMatrix, Error, Method, Order};

fn main() -> ccmatrix::Result<()> {
    let m = parse_matrix("900, 1023, 721, 256\n1 10 700 20\n")?;
    for method in [Method::Sm, Method::Vlb] {
        let c = CompressedMatrix::compress(&m, method, Order::ColMajor);
        let mut bytes = Vec::new();
        write_container(&c, &mut bytes)?;
        println!("{method:?}: {} bytes ({HEADER_LEN} header)", bytes.len());

        let back = read_container(bytes.as_slice())?;
        assert_eq!(back, c);
        assert_eq!(back.decompress(), m);

        bytes.truncate(bytes.len() - 3);
        match read_container(bytes.as_slice()) {
            Err(e @ Error::TruncatedPayload(_)) => println!("  truncated: {e}"),
            other => panic!("unexpected {other:?}"),
        }
        bytes[0] = b'X';
        match read_container(bytes.as_slice()) {
            Err(e @ Error::BadMagic(_)) => println!("  corrupted: {e}"),
            other => panic!("unexpected {other:?}"),
        }
    }
    Ok(())
}
