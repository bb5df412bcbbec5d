//! LU factorization with partial pivoting, used for inverses and determinants.

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// `P A = L U` packed in one matrix, with the row permutation and its parity.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: DenseMatrix<f64>,
    perm: Vec<usize>,
    odd_swaps: bool,
}

impl Lu {
    /// Factors a square matrix. A zero pivot column is reported as singular.
    pub fn factor(a: &DenseMatrix<f64>) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::NotSquare {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut odd_swaps = false;
        for k in 0..n {
            let (piv, piv_abs) =
                (k..n)
                    .map(|i| (i, lu[(i, k)].abs()))
                    .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if piv_abs == 0.0 || !piv_abs.is_finite() {
                return Err(Error::Singular { column: k });
            }
            if piv != k {
                let s = lu.as_mut_slice();
                for j in 0..n {
                    s.swap(k * n + j, piv * n + j);
                }
                perm.swap(k, piv);
                odd_swaps = !odd_swaps;
            }
            let pivot = lu[(k, k)];
            let (upper, lower) = lu.as_mut_slice().split_at_mut((k + 1) * n);
            let row_k = &upper[k * n..];
            for row in lower.chunks_exact_mut(n) {
                let l = row[k] / pivot;
                row[k] = l;
                if l != 0.0 {
                    for j in (k + 1)..n {
                        row[j] -= l * row_k[j];
                    }
                }
            }
        }
        Ok(Lu { lu, perm, odd_swaps })
    }

    pub fn determinant(&self) -> f64 {
        let d: f64 = self.lu.diag().iter().product();
        if self.odd_swaps {
            -d
        } else {
            d
        }
    }

    /// Solves `A x = b` in place.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.perm.len();
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = self.lu.row(i);
            let s: f64 = row[..i].iter().zip(&x[..i]).map(|(l, y)| l * y).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let s: f64 = row[i + 1..].iter().zip(&x[i + 1..]).map(|(u, y)| u * y).sum();
            x[i] = (x[i] - s) / row[i];
        }
        b.copy_from_slice(&x);
    }

    /// `A^{-T}`, built row by row from solves with the unit vectors.
    ///
    /// Row `j` of `A^{-T}` is column `j` of `A^{-1}`.
    pub fn inverse_transpose(&self) -> DenseMatrix<f64> {
        let n = self.perm.len();
        let mut out = DenseMatrix::zeros(n, n);
        let mut e = vec![0.0; n];
        for j in 0..n {
            e.iter_mut().for_each(|x| *x = 0.0);
            e[j] = 1.0;
            self.solve_in_place(&mut e);
            out.row_mut(j).copy_from_slice(&e);
        }
        out
    }
}

/// Determinant via LU; 0 for an exactly singular matrix.
pub fn determinant(a: &DenseMatrix<f64>) -> Result<f64> {
    match Lu::factor(a) {
        Ok(lu) => Ok(lu.determinant()),
        Err(Error::Singular { .. }) => Ok(0.0),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_small_cases() {
        let a = DenseMatrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        assert_eq!(determinant(&a).unwrap(), -1.0);
        let b = DenseMatrix::from_rows(&[[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 4.0]]).unwrap();
        // 2(12 - 1) - 1(4 - 0) = 18
        assert!((determinant(&b).unwrap() - 18.0).abs() < 1e-13);
        let s = DenseMatrix::from_rows(&[[1.0, 2.0], [2.0, 4.0]]).unwrap();
        assert_eq!(determinant(&s).unwrap(), 0.0);
    }

    #[test]
    fn inverse_transpose_times_transpose_is_identity() {
        let a = DenseMatrix::from_fn(6, 6, |i, j| {
            1.0 / (1.0 + i as f64 + j as f64) + if i == j { 1.0 } else { 0.0 }
        });
        let lu = Lu::factor(&a).unwrap();
        let it = lu.inverse_transpose();
        // A^{-T} A^T = I
        let mut p = it.matmul(&a.transpose()).unwrap();
        p.sub_identity_mut();
        assert!(p.max_abs() < 1e-13);
    }

    #[test]
    fn singular_is_reported() {
        let z = DenseMatrix::<f64>::zeros(3, 3);
        assert!(matches!(Lu::factor(&z), Err(Error::Singular { column: 0 })));
    }
}
