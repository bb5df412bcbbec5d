//! Jacobi rotation pairs and their application.

use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, SymMatrix};
use crate::precision::Real;

/// Rotation `G` equal to the identity except `G[p][p] = G[q][q] = c`,
/// `G[p][q] = s`, `G[q][p] = -s`. Indices are 0-based with `p < q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GivensPair<T = f64> {
    pub p: usize,
    pub q: usize,
    pub c: T,
    pub s: T,
}

impl<T: Real> GivensPair<T> {
    pub fn identity(p: usize, q: usize) -> Self {
        GivensPair {
            p,
            q,
            c: T::one(),
            s: T::zero(),
        }
    }

    /// `s / c`.
    pub fn tangent(&self) -> T {
        self.s / self.c
    }
}

pub(crate) fn check_pair(n: usize, p: usize, q: usize) -> Result<()> {
    if p < q && q < n {
        Ok(())
    } else {
        Err(Error::InvalidPair { p, q, n })
    }
}

/// Rotation whose similarity `G^T A G` zeroes `a_pq`.
///
/// Uses the smaller root `t = 1 / (tau ± sqrt(1 + tau^2))`, so `|s| <= c`.
pub fn jacobi_pair<T: Real>(a: &SymMatrix<T>, p: usize, q: usize) -> Result<GivensPair<T>> {
    check_pair(a.order(), p, q)?;
    Ok(pair_unchecked(a.as_slice(), a.order(), p, q))
}

#[inline]
pub(crate) fn pair_unchecked<T: Real>(a: &[T], n: usize, p: usize, q: usize) -> GivensPair<T> {
    let apq = a[p * n + q];
    if apq == T::zero() {
        return GivensPair::identity(p, q);
    }
    let two = T::one() + T::one();
    let tau = (a[q * n + q] - a[p * n + p]) / (two * apq);
    // hypot keeps 1 + tau^2 from overflowing when a_pq is tiny.
    let root = T::one().hypot(tau);
    let t = if tau >= T::zero() {
        T::one() / (tau + root)
    } else {
        T::one() / (tau - root)
    };
    let c = T::one() / (T::one() + t * t).sqrt();
    GivensPair { p, q, c, s: c * t }
}

/// `A <- G^T A G`. Only rows and columns `p`, `q` are written, and the result
/// stays exactly symmetric.
pub fn apply_rotation_sym<T: Real>(a: &mut SymMatrix<T>, g: &GivensPair<T>) -> Result<()> {
    let n = a.order();
    check_pair(n, g.p, g.q)?;
    rotate_sym_unchecked(a.as_mut_slice(), n, g);
    Ok(())
}

#[inline]
pub(crate) fn rotate_sym_unchecked<T: Real>(a: &mut [T], n: usize, g: &GivensPair<T>) {
    let GivensPair { p, q, c, s } = *g;
    let app = a[p * n + p];
    let aqq = a[q * n + q];
    let apq = a[p * n + q];

    let (head, tail) = a.split_at_mut(q * n);
    let row_p = &mut head[p * n..(p + 1) * n];
    let row_q = &mut tail[..n];
    rotate_rows(row_p, row_q, c, s);

    // The 2x2 block of G^T A G written as corrections to A, so the
    // rounding error shrinks with the angle.
    let two = T::one() + T::one();
    let shift = s * (two * c * apq + s * (app - aqq));
    let bpp = app - shift;
    let bqq = aqq + shift;
    let bpq = apq + s * (c * (app - aqq) - two * s * apq);
    row_p[p] = bpp;
    row_p[q] = bpq;
    row_q[p] = bpq;
    row_q[q] = bqq;

    // Mirror the two rows into the two columns.
    for k in 0..n {
        if k != p && k != q {
            a[k * n + p] = a[p * n + k];
            a[k * n + q] = a[q * n + k];
        }
    }
}

/// `row_p <- c row_p - s row_q`, `row_q <- s row_p + c row_q`.
///
/// For `c > 0` this is evaluated as `x - s (y + tau x)`, `y + s (x - tau y)`
/// with `tau = s / (1 + c)`: near-identity rotations then perturb each entry
/// by a rounding error proportional to `s`, not to the entry.
#[inline]
pub(crate) fn rotate_rows<T: Real>(row_p: &mut [T], row_q: &mut [T], c: T, s: T) {
    if c > T::zero() {
        let tau = s / (T::one() + c);
        for (x, y) in row_p.iter_mut().zip(row_q.iter_mut()) {
            let xp = *x;
            let yq = *y;
            *x = xp - s * (yq + tau * xp);
            *y = yq + s * (xp - tau * yq);
        }
    } else {
        for (x, y) in row_p.iter_mut().zip(row_q.iter_mut()) {
            let xp = *x;
            let yq = *y;
            *x = c * xp - s * yq;
            *y = s * xp + c * yq;
        }
    }
}

/// `V <- V G`: columns `p` and `q` of `V` are replaced by their rotation.
pub fn apply_rotation_right<T: Real>(v: &mut DenseMatrix<T>, g: &GivensPair<T>) -> Result<()> {
    check_pair(v.cols(), g.p, g.q)?;
    let GivensPair { p, q, c, s } = *g;
    for i in 0..v.rows() {
        let row = v.row_mut(i);
        let (mut x, mut y) = ([row[p]], [row[q]]);
        rotate_rows(&mut x, &mut y, c, s);
        row[p] = x[0];
        row[q] = y[0];
    }
    Ok(())
}

/// Rotates rows `p`, `q` of a matrix that stores `V^T`, which is the same as
/// `V <- V G` on `V`.
#[inline]
pub(crate) fn rotate_transposed<T: Real>(vt: &mut [T], n: usize, g: &GivensPair<T>) {
    let (head, tail) = vt.split_at_mut(g.q * n);
    rotate_rows(&mut head[g.p * n..(g.p + 1) * n], &mut tail[..n], g.c, g.s);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::off_norm;

    #[test]
    fn zero_entry_gives_identity() {
        let a = SymMatrix::from_rows(&[[1.0, 0.0], [0.0, 5.0]]).unwrap();
        let g = jacobi_pair(&a, 0, 1).unwrap();
        assert_eq!((g.c, g.s), (1.0, 0.0));
        let mut b = a.clone();
        apply_rotation_sym(&mut b, &g).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn equal_diagonal_gives_quarter_turn() {
        let a = SymMatrix::from_rows(&[[1.0, 1.0], [1.0, 1.0]]).unwrap();
        let g = jacobi_pair(&a, 0, 1).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((g.c - h).abs() <= f64::EPSILON && (g.s - h).abs() <= f64::EPSILON);
        let mut b = a.clone();
        apply_rotation_sym(&mut b, &g).unwrap();
        assert!(b[(0, 0)].abs() < 1e-15);
        assert!((b[(1, 1)] - 2.0).abs() < 1e-15);
        assert!(b[(0, 1)].abs() < 1e-15);

        let a = SymMatrix::from_rows(&[[2.0f64, 1.0], [1.0, 2.0]]).unwrap();
        let mut b = a.clone();
        apply_rotation_sym(&mut b, &jacobi_pair(&a, 0, 1).unwrap()).unwrap();
        assert!((b[(0, 0)] - 1.0).abs() < 1e-15);
        assert!((b[(1, 1)] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn invalid_pairs_are_rejected() {
        let a = SymMatrix::<f64>::identity(3);
        assert!(jacobi_pair(&a, 1, 1).is_err());
        assert!(jacobi_pair(&a, 2, 1).is_err());
        assert!(jacobi_pair(&a, 0, 3).is_err());
        let mut v = DenseMatrix::<f64>::identity(3);
        assert!(apply_rotation_right(&mut v, &GivensPair::identity(0, 5)).is_err());
    }

    #[test]
    fn tiny_coupling_does_not_lose_the_rotation() {
        // Subtracting tau from sqrt(1 + tau^2) would give s = 0 here.
        let a = SymMatrix::from_rows(&[[1.0f64, 1e-9], [1e-9, 2.0]]).unwrap();
        let g = jacobi_pair(&a, 0, 1).unwrap();
        assert!((g.s - 1e-9).abs() < 1e-22);
    }

    #[test]
    fn rotation_touches_only_rows_and_columns_p_q() {
        let m = DenseMatrix::from_fn(5, 5, |i, j| {
            ((i + 1) * (j + 1)) as f64 / 7.0 + (i as f64 - j as f64).powi(2)
        });
        let a = SymMatrix::new(m).unwrap();
        let g = jacobi_pair(&a, 1, 3).unwrap();
        let mut b = a.clone();
        apply_rotation_sym(&mut b, &g).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                if ![1, 3].contains(&i) && ![1, 3].contains(&j) {
                    assert_eq!(a[(i, j)].to_bits(), b[(i, j)].to_bits());
                }
                assert_eq!(b[(i, j)].to_bits(), b[(j, i)].to_bits());
            }
        }
        let before = off_norm(&a);
        let after = off_norm(&b);
        let want = (before * before - 2.0 * a[(1, 3)] * a[(1, 3)]).sqrt();
        assert!((after - want).abs() <= 64.0 * 5.0 * 1.1e-16 * want);

        let mut v = DenseMatrix::<f64>::identity(5);
        apply_rotation_right(&mut v, &g).unwrap();
        assert!((v[(1, 1)] - g.c).abs() <= f64::EPSILON);
        assert!((v[(3, 3)] - g.c).abs() <= f64::EPSILON);
        assert_eq!(v[(1, 3)], g.s);
        assert_eq!(v[(3, 1)], -g.s);
        assert_eq!(v[(0, 0)], 1.0);
        assert_eq!(v[(0, 1)], 0.0);
    }
}
