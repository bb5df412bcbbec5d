//! Dense row-major matrices at either precision.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::precision::{Precision, Real};

/// A dense `rows x cols` matrix stored row-major and contiguous.
///
/// The element type fixes the precision: `DenseMatrix<f32>` is a low-precision
/// matrix and `DenseMatrix<f64>` a working-precision one.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix<T = f64> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: std::fmt::LowerExp> std::fmt::Debug for DenseMatrix<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "DenseMatrix<{}> {}x{} [",
            std::any::type_name::<T>(),
            self.rows,
            self.cols
        )?;
        for i in 0..self.rows.min(8) {
            write!(f, " ")?;
            for x in self.data[i * self.cols..(i + 1) * self.cols].iter().take(8) {
                write!(f, " {:>12.5e}", x)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<T: Real> DenseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{} entries for {rows}x{cols}", rows * cols),
                found: format!("{} entries", data.len()),
            });
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    /// Builds a matrix from row vectors, which must all have the same length.
    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != ncols {
                return Err(Error::DimensionMismatch {
                    expected: format!("{ncols} columns"),
                    found: format!("{} columns in row {i}", r.len()),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(DenseMatrix {
            rows: nrows,
            cols: ncols,
            data,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        DenseMatrix { rows, cols, data }
    }

    pub fn diagonal(values: &[T]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m.data[i * n + i] = v;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn precision(&self) -> Precision {
        T::PRECISION
    }

    #[inline]
    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [T] {
        let c = self.cols;
        &mut self.data[i * c..(i + 1) * c]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn diag(&self) -> Vec<T> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn trace(&self) -> T {
        self.diag().into_iter().sum()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, x| m.max(x.abs()))
    }

    pub fn map<U: Real>(&self, f: impl Fn(T) -> U) -> DenseMatrix<U> {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn scale(&self, alpha: T) -> Self {
        self.map(|x| alpha * x)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a - b).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect(),
        })
    }

    /// Subtracts the identity in place (square matrices only).
    pub fn sub_identity_mut(&mut self) {
        let n = self.rows.min(self.cols);
        for i in 0..n {
            self.data[i * self.cols + i] = self.data[i * self.cols + i] - T::one();
        }
    }

    /// Multiplies column `j` by `d[j]`, i.e. returns `self * diag(d)`.
    pub fn scale_columns(&self, d: &[T]) -> Result<Self> {
        if d.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{} scale factors", self.cols),
                found: format!("{}", d.len()),
            });
        }
        let mut out = self.clone();
        for row in out.data.chunks_exact_mut(self.cols.max(1)) {
            for (x, &s) in row.iter_mut().zip(d) {
                *x = *x * s;
            }
        }
        Ok(out)
    }

    /// `self * other`.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.gemm_impl(false, other, false, T::one())
    }

    /// `self^T * other` without forming the transpose.
    pub fn t_matmul(&self, other: &Self) -> Result<Self> {
        self.gemm_impl(true, other, false, T::one())
    }

    /// `self * other^T` without forming the transpose.
    pub fn matmul_t(&self, other: &Self) -> Result<Self> {
        self.gemm_impl(false, other, true, T::one())
    }

    /// `alpha * op(self) * op(other)` where `op` optionally transposes.
    pub(crate) fn gemm_impl(&self, trans_a: bool, other: &Self, trans_b: bool, alpha: T) -> Result<Self> {
        let (m, ka, rsa, csa) = if trans_a {
            (self.cols, self.rows, 1isize, self.cols as isize)
        } else {
            (self.rows, self.cols, self.cols as isize, 1isize)
        };
        let (kb, n, rsb, csb) = if trans_b {
            (other.cols, other.rows, 1isize, other.cols as isize)
        } else {
            (other.rows, other.cols, other.cols as isize, 1isize)
        };
        if ka != kb {
            return Err(Error::DimensionMismatch {
                expected: format!("inner dimension {ka}"),
                found: format!("{kb}"),
            });
        }
        let mut out = Self::zeros(m, n);
        if m == 0 || n == 0 {
            return Ok(out);
        }
        // SAFETY: strides describe the row-major buffers of `self`, `other`
        // and the freshly allocated `out`, whose shapes were checked above.
        unsafe {
            T::gemm(
                m,
                ka,
                n,
                alpha,
                self.data.as_ptr(),
                rsa,
                csa,
                other.data.as_ptr(),
                rsb,
                csb,
                T::zero(),
                out.data.as_mut_ptr(),
                n as isize,
                1,
            );
        }
        Ok(out)
    }

    /// Matrix-vector product `self * x`.
    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        debug_assert_eq!(x.len(), self.cols);
        self.data
            .chunks_exact(self.cols.max(1))
            .take(self.rows)
            .map(|row| row.iter().zip(x).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    /// Transposed matrix-vector product `self^T * x`.
    pub fn t_matvec(&self, x: &[T]) -> Vec<T> {
        debug_assert_eq!(x.len(), self.rows);
        let mut y = vec![T::zero(); self.cols];
        for (row, &xi) in self.data.chunks_exact(self.cols.max(1)).zip(x) {
            for (yj, &a) in y.iter_mut().zip(row) {
                *yj = *yj + a * xi;
            }
        }
        y
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{}x{}", self.rows, self.cols),
                found: format!("{}x{}", other.rows, other.cols),
            });
        }
        Ok(())
    }

    /// Largest `|a_ij - a_ji|` over the matrix (square only).
    pub fn symmetry_defect(&self) -> T {
        let n = self.rows;
        let mut worst = T::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                worst = worst.max((self.data[i * n + j] - self.data[j * n + i]).abs());
            }
        }
        worst
    }
}

impl<T> Index<(usize, usize)> for DenseMatrix<T> {
    type Output = T;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for DenseMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// A square matrix whose entries satisfy `a_ij = a_ji` up to rounding.
///
/// Construction checks `max |a_ij - a_ji| <= 8 n u max |a_ij|`, with `u` the
/// unit roundoff of the element type.
#[derive(Clone, PartialEq)]
pub struct SymMatrix<T = f64> {
    inner: DenseMatrix<T>,
}

impl<T: std::fmt::LowerExp> std::fmt::Debug for SymMatrix<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Sym{:?}", self.inner)
    }
}

impl<T: Real> SymMatrix<T> {
    pub fn new(m: DenseMatrix<T>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows,
                cols: m.cols,
            });
        }
        if m.rows == 0 {
            return Err(Error::Empty);
        }
        let defect = m.symmetry_defect().as_f64();
        let tolerance = Self::symmetry_tolerance(&m);
        if defect > tolerance || defect.is_nan() {
            return Err(Error::NotSymmetric { defect, tolerance });
        }
        Ok(SymMatrix { inner: m })
    }

    /// Replaces `m` by `(m + m^T) / 2`, which is exactly symmetric.
    pub fn symmetrized(m: DenseMatrix<T>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows,
                cols: m.cols,
            });
        }
        if m.rows == 0 {
            return Err(Error::Empty);
        }
        let mut s = SymMatrix { inner: m };
        s.symmetrize();
        Ok(s)
    }

    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self> {
        Self::new(DenseMatrix::from_rows(rows)?)
    }

    pub fn identity(n: usize) -> Self {
        SymMatrix {
            inner: DenseMatrix::identity(n),
        }
    }

    pub fn diagonal(values: &[T]) -> Self {
        SymMatrix {
            inner: DenseMatrix::diagonal(values),
        }
    }

    pub fn symmetry_tolerance(m: &DenseMatrix<T>) -> f64 {
        8.0 * m.rows as f64 * T::PRECISION.unit_roundoff() * m.max_abs().as_f64()
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.inner.rows
    }

    pub fn precision(&self) -> Precision {
        T::PRECISION
    }

    #[inline]
    pub fn as_dense(&self) -> &DenseMatrix<T> {
        &self.inner
    }

    pub fn into_dense(self) -> DenseMatrix<T> {
        self.inner
    }

    #[inline]
    pub fn as_slice(&self) -> &[T] {
        &self.inner.data
    }

    #[inline]
    pub(crate) fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.inner.data
    }

    pub fn diag(&self) -> Vec<T> {
        self.inner.diag()
    }

    pub fn trace(&self) -> T {
        self.inner.trace()
    }

    /// `A <- (A + A^T) / 2`.
    pub fn symmetrize(&mut self) {
        let n = self.order();
        let a = &mut self.inner.data;
        let half = T::from_f64(0.5);
        for i in 0..n {
            for j in (i + 1)..n {
                let v = (a[i * n + j] + a[j * n + i]) * half;
                a[i * n + j] = v;
                a[j * n + i] = v;
            }
        }
    }

    /// Sets every off-diagonal entry to zero.
    pub fn zero_off_diagonal(&mut self) {
        let n = self.order();
        for (k, x) in self.inner.data.iter_mut().enumerate() {
            if k / n != k % n {
                *x = T::zero();
            }
        }
    }
}

impl<T> Index<(usize, usize)> for SymMatrix<T> {
    type Output = T;

    #[inline]
    fn index(&self, idx: (usize, usize)) -> &T {
        &self.inner[idx]
    }
}

/// Rounds every entry to the nearest binary32 value (ties to even).
///
/// Entries below the binary32 subnormal range flush to zero; finite entries
/// beyond the binary32 range are an error.
pub fn demote(a: &DenseMatrix<f64>) -> Result<DenseMatrix<f32>> {
    let mut data = Vec::with_capacity(a.data.len());
    for (k, &x) in a.data.iter().enumerate() {
        let y = x as f32;
        if y.is_infinite() && x.is_finite() {
            return Err(Error::Overflow {
                row: k / a.cols.max(1),
                col: k % a.cols.max(1),
                value: x,
            });
        }
        data.push(y);
    }
    Ok(DenseMatrix {
        rows: a.rows,
        cols: a.cols,
        data,
    })
}

/// Exact embedding of a binary32 matrix into binary64.
pub fn promote(a: &DenseMatrix<f32>) -> DenseMatrix<f64> {
    a.map(|x| x as f64)
}

pub fn demote_sym(a: &SymMatrix<f64>) -> Result<SymMatrix<f32>> {
    // Rounding is applied entrywise, so exact symmetry is preserved.
    Ok(SymMatrix {
        inner: demote(&a.inner)?,
    })
}

pub fn promote_sym(a: &SymMatrix<f32>) -> SymMatrix<f64> {
    SymMatrix {
        inner: promote(&a.inner),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_vec_checks_length() {
        assert!(DenseMatrix::<f64>::from_vec(2, 2, vec![1.0; 3]).is_err());
        assert!(DenseMatrix::<f64>::from_vec(2, 3, vec![1.0; 6]).is_ok());
    }

    #[test]
    fn products_agree_with_naive_loops() {
        let a = DenseMatrix::<f64>::from_fn(3, 4, |i, j| (i * 4 + j) as f64 - 5.0);
        let b = DenseMatrix::<f64>::from_fn(4, 2, |i, j| 1.0 / (1.0 + i as f64 + 2.0 * j as f64));
        let c = a.matmul(&b).unwrap();
        for i in 0..3 {
            for j in 0..2 {
                let want: f64 = (0..4).map(|k| a[(i, k)] * b[(k, j)]).sum();
                assert!((c[(i, j)] - want).abs() < 1e-14);
            }
        }
        let at = a.transpose();
        assert_eq!(at.t_matmul(&b).unwrap(), c);
        let bt = b.transpose();
        assert_eq!(a.matmul_t(&bt).unwrap(), c);
        assert!(a.matmul(&a).is_err());
    }

    #[test]
    fn sym_constructor_enforces_tolerance() {
        let ok = SymMatrix::from_rows(&[[1.0, 2.0], [2.0 + 1e-16, 1.0]]);
        assert!(ok.is_ok());
        let bad = SymMatrix::from_rows(&[[1.0, 2.0], [2.1, 1.0]]);
        assert!(matches!(bad, Err(Error::NotSymmetric { .. })));
        let rect = SymMatrix::new(DenseMatrix::<f64>::zeros(2, 3));
        assert!(matches!(rect, Err(Error::NotSquare { .. })));
    }

    #[test]
    fn symmetrized_is_bit_symmetric() {
        let m = DenseMatrix::<f64>::from_fn(5, 5, |i, j| (i as f64 + 0.1).sin() * (j as f64 * 1.7).cos());
        let s = SymMatrix::symmetrized(m).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(s[(i, j)].to_bits(), s[(j, i)].to_bits());
            }
        }
    }

    #[test]
    fn demote_rounds_to_nearest() {
        let a = DenseMatrix::from_rows(&[[1.0 + 2f64.powi(-25), 2f64.powi(-150)]]).unwrap();
        let d = demote(&a).unwrap();
        assert_eq!(d.as_slice(), &[1.0f32, 0.0]);

        // Exactly halfway between 1 and the next binary32: ties to even.
        let tie = DenseMatrix::from_rows(&[[1.0 + 2f64.powi(-24)]]).unwrap();
        assert_eq!(demote(&tie).unwrap()[(0, 0)], 1.0f32);
        let tie_up = DenseMatrix::from_rows(&[[1.0 + 3.0 * 2f64.powi(-24)]]).unwrap();
        assert_eq!(demote(&tie_up).unwrap()[(0, 0)], 1.0f32 + 2.0 * f32::EPSILON);
    }

    #[test]
    fn demote_overflow_is_an_error() {
        let a = DenseMatrix::from_rows(&[[1.0, 1e39]]).unwrap();
        assert!(matches!(demote(&a), Err(Error::Overflow { row: 0, col: 1, .. })));
    }

    #[test]
    fn promote_demote_round_trip_is_exact_for_binary32_values() {
        let a = DenseMatrix::<f32>::from_fn(4, 4, |i, j| (i as f32 * 0.37 - j as f32).exp());
        assert_eq!(demote(&promote(&a)).unwrap(), a);
    }
}
