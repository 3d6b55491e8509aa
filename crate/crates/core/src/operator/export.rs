use std::io::{BufRead, Write};

use ndarray::Array2;
use num_complex::Complex64;

use super::OperatorError;

/// Writes a dense complex matrix in MatrixMarket array format
/// (column-major, one `re im` pair per line).
pub fn write_matrix_market<W: Write>(
    matrix: &Array2<Complex64>,
    mut out: W,
) -> Result<(), OperatorError> {
    writeln!(out, "%%MatrixMarket matrix array complex general")?;
    writeln!(out, "{} {}", matrix.nrows(), matrix.ncols())?;
    for c in 0..matrix.ncols() {
        for r in 0..matrix.nrows() {
            let v = matrix[[r, c]];
            writeln!(out, "{:.17e} {:.17e}", v.re, v.im)?;
        }
    }
    Ok(())
}

pub fn read_matrix_market<R: BufRead>(input: R) -> Result<Array2<Complex64>, OperatorError> {
    let bad = |m: &str| OperatorError::Format(m.to_string());
    let mut lines = input.lines();
    let header = lines.next().ok_or_else(|| bad("empty input"))??;
    if !header.starts_with("%%MatrixMarket matrix array complex") {
        return Err(bad("unsupported header"));
    }
    let mut data =
        lines.filter(|l| !matches!(l, Ok(s) if s.starts_with('%') || s.trim().is_empty()));
    let dims = data.next().ok_or_else(|| bad("missing size line"))??;
    let dims: Vec<usize> = dims
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| bad("bad size line")))
        .collect::<Result<_, _>>()?;
    let [rows, cols] = dims[..] else {
        return Err(bad("size line needs two numbers"));
    };
    let mut m = Array2::<Complex64>::zeros((rows, cols));
    for c in 0..cols {
        for r in 0..rows {
            let line = data.next().ok_or_else(|| bad("too few entries"))??;
            let mut it = line.split_whitespace().map(|t| t.parse::<f64>());
            match (it.next(), it.next()) {
                (Some(Ok(re)), Some(Ok(im))) => m[[r, c]] = Complex64::new(re, im),
                _ => return Err(bad("bad entry")),
            }
        }
    }
    Ok(m)
}
