//! Plain-text matrices: one row per line, values separated by whitespace
//! and/or commas, blank lines ignored.

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

pub fn parse_matrix(input: &str) -> Result<DenseMatrix> {
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for (lineno, line) in input.lines().enumerate() {
        let line_no = lineno + 1;
        let fields: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|f| !f.is_empty())
            .collect();
        if fields.is_empty() {
            if line.contains(',') {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "separators without values".into(),
                });
            }
            continue;
        }
        let row = fields
            .iter()
            .map(|f| {
                f.parse::<u64>().map_err(|e| Error::Parse {
                    line: line_no,
                    msg: format!("{f:?} is not an unsigned 64-bit integer ({e})"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected {} values, found {}", first.len(), row.len()),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 0,
            msg: "no matrix rows".into(),
        });
    }
    DenseMatrix::from_rows(&rows)
}

/// Canonical text form (single spaces, trailing newline).
pub fn format_matrix(m: &DenseMatrix) -> String {
    m.to_string()
}
