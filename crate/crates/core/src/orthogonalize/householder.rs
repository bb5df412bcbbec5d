//! Householder reflectors and QR factorization.

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// `P = I - beta v v^T`, with `v[0]` stored explicitly (not normalized to 1).
#[derive(Debug, Clone, PartialEq)]
pub struct HouseholderReflector {
    pub v: Vec<f64>,
    pub beta: f64,
}

/// Reflector mapping `x` to `-sign(x[0]) ||x|| e_1`, with `sign(0) = +1`.
///
/// Both branches of `v[0]` add quantities of equal sign, so there is no
/// cancellation even when the tail of `x` is tiny.
pub fn house(x: &[f64]) -> Result<HouseholderReflector> {
    let (&x1, tail) = x.split_first().ok_or(Error::ZeroVector)?;
    let sigma: f64 = tail.iter().map(|t| t * t).sum();
    if x1 == 0.0 && sigma == 0.0 {
        return Err(Error::ZeroVector);
    }
    let mu = (x1 * x1 + sigma).sqrt();
    let v1 = if x1 >= 0.0 { x1 + mu } else { x1 - mu };
    let mut v = Vec::with_capacity(x.len());
    v.push(v1);
    v.extend_from_slice(tail);
    let beta = 2.0 / (v1 * v1 + sigma);
    Ok(HouseholderReflector { v, beta })
}

impl HouseholderReflector {
    /// `P x` for a vector of the reflector's length.
    pub fn apply_to_vector(&self, x: &[f64]) -> Vec<f64> {
        let w: f64 = self.v.iter().zip(x).map(|(a, b)| a * b).sum();
        x.iter().zip(&self.v).map(|(xi, vi)| xi - self.beta * w * vi).collect()
    }

    /// `D <- D - (beta v)(v^T D)` on the block of `d` with rows
    /// `row0..row0+len(v)` and columns `col0..`.
    pub fn apply_left(&self, d: &mut DenseMatrix<f64>, row0: usize, col0: usize) {
        let cols = d.cols();
        let mut w = vec![0.0; cols - col0];
        for (i, &vi) in self.v.iter().enumerate() {
            if vi != 0.0 {
                for (wj, &dij) in w.iter_mut().zip(&d.row(row0 + i)[col0..]) {
                    *wj += vi * dij;
                }
            }
        }
        for (i, &vi) in self.v.iter().enumerate() {
            let f = self.beta * vi;
            if f != 0.0 {
                for (dij, &wj) in d.row_mut(row0 + i)[col0..].iter_mut().zip(&w) {
                    *dij -= f * wj;
                }
            }
        }
    }

    /// `D <- D - (D v)(beta v^T)` on the columns `col0..col0+len(v)` of `d`.
    pub fn apply_right(&self, d: &mut DenseMatrix<f64>, col0: usize) {
        let len = self.v.len();
        for i in 0..d.rows() {
            let row = &mut d.row_mut(i)[col0..col0 + len];
            let s: f64 = row.iter().zip(&self.v).map(|(a, b)| a * b).sum();
            let f = self.beta * s;
            if f != 0.0 {
                for (x, &vi) in row.iter_mut().zip(&self.v) {
                    *x -= f * vi;
                }
            }
        }
    }
}

/// `A = Q R` with orthogonal `Q` and upper triangular `R`.
#[derive(Debug, Clone)]
pub struct QrFactors {
    pub q: DenseMatrix<f64>,
    pub r: DenseMatrix<f64>,
}

/// Householder QR without pivoting or sign normalization of `R`.
///
/// Reflectors are applied as rank-1 updates to the trailing block only.
/// A column that is already zero from the diagonal down is left alone.
pub fn householder_qr(a: &DenseMatrix<f64>) -> Result<QrFactors> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    if n == 0 {
        return Err(Error::Empty);
    }
    let mut r = a.clone();
    let mut q = DenseMatrix::identity(n);
    for k in 0..n - 1 {
        let x: Vec<f64> = (k..n).map(|i| r[(i, k)]).collect();
        let h = match house(&x) {
            Ok(h) => h,
            Err(Error::ZeroVector) => continue,
            Err(e) => return Err(e),
        };
        h.apply_left(&mut r, k, k);
        for i in (k + 1)..n {
            r[(i, k)] = 0.0;
        }
        h.apply_right(&mut q, k);
    }
    Ok(QrFactors { q, r })
}
