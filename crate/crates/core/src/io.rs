//! Plain-text matrix format.
//!
//! The first line holds `rows cols`; each following line holds one row of
//! space-separated floats written with 17 significant digits, which
//! round-trips binary64 exactly.

use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

pub fn write_matrix<W: Write>(mut w: W, a: &DenseMatrix<f64>) -> Result<()> {
    writeln!(w, "{} {}", a.rows(), a.cols())?;
    for i in 0..a.rows() {
        let line: Vec<String> = a.row(i).iter().map(|x| format!("{x:.16e}")).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_matrix<R: BufRead>(r: R) -> Result<DenseMatrix<f64>> {
    let mut lines = r.lines().filter(|l| l.as_ref().map_or(true, |s| !s.trim().is_empty()));
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("missing header line".into()))??;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad dimension `{t}`"))))
        .collect::<Result<_>>()?;
    let [rows, cols] = dims[..] else {
        return Err(Error::Parse(format!("header must be `rows cols`, got `{header}`")));
    };
    let mut data = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("expected {rows} rows, found {i}")))??;
        let before = data.len();
        for t in line.split_whitespace() {
            let v: f64 = t
                .parse()
                .map_err(|_| Error::Parse(format!("bad number `{t}` in row {i}")))?;
            data.push(v);
        }
        if data.len() - before != cols {
            return Err(Error::Parse(format!(
                "row {i} has {} entries, expected {cols}",
                data.len() - before
            )));
        }
    }
    if lines.next().is_some() {
        return Err(Error::Parse(format!("more than {rows} rows")));
    }
    DenseMatrix::from_vec(rows, cols, data)
}

pub fn save_matrix(path: impl AsRef<Path>, a: &DenseMatrix<f64>) -> Result<()> {
    let f = std::fs::File::create(path)?;
    write_matrix(std::io::BufWriter::new(f), a)
}

pub fn load_matrix(path: impl AsRef<Path>) -> Result<DenseMatrix<f64>> {
    let f = std::fs::File::open(path)?;
    read_matrix(std::io::BufReader::new(f))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let a = DenseMatrix::from_fn(3, 2, |i, j| {
            ((i * 7 + j) as f64).sin() * 10f64.powi(i as i32 * 100 - 100)
        });
        let mut buf = Vec::new();
        write_matrix(&mut buf, &a).unwrap();
        let b = read_matrix(buf.as_slice()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn header_and_row_errors() {
        assert!(matches!(read_matrix("".as_bytes()), Err(Error::Parse(_))));
        assert!(matches!(read_matrix("2\n1 2\n".as_bytes()), Err(Error::Parse(_))));
        assert!(matches!(read_matrix("2 2\n1 2\n3\n".as_bytes()), Err(Error::Parse(_))));
        assert!(matches!(read_matrix("1 1\nx\n".as_bytes()), Err(Error::Parse(_))));
        assert!(matches!(read_matrix("1 1\n1\n2\n".as_bytes()), Err(Error::Parse(_))));
        assert_eq!(read_matrix("1 1\n7\n".as_bytes()).unwrap()[(0, 0)], 7.0);
    }
}
