//! Householder tridiagonalization followed by implicit QL, at either precision.
//!
//! This is the fast backend for the low-precision stage of the mixed solver.
//! The transformation matrix is kept transposed so that every inner loop,
//! including the QL rotations, runs over contiguous memory.

use crate::jacobi::{SolveReport, SpectralResult};
use crate::matrix::{DenseMatrix, SymMatrix};
use crate::precision::Real;

/// QL iterations allowed per eigenvalue before giving up.
const MAX_QL_ITERS_PER_EIGENVALUE: usize = 60;

/// Full eigendecomposition `A = V diag(lambda) V^T`, eigenvalues unsorted.
///
/// `report.sweeps` counts implicit QL iterations, `report.rotations` the
/// plane rotations applied to the eigenvector matrix.
pub fn symmetric_eig_ql<T: Real>(a: &SymMatrix<T>) -> SpectralResult<T> {
    let n = a.order();
    // `w` holds V^T: row j of w is column j of V.
    let mut w = a.as_dense().clone();
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    tridiagonalize(&mut w, &mut d, &mut e);
    let report = ql_implicit(&mut w, &mut d, &mut e);
    SpectralResult {
        v: w.transpose(),
        lambda: d,
        report,
    }
}

/// Reduces `w` (holding a symmetric matrix) to tridiagonal form. On return
/// `d` is the diagonal, `e[1..]` the subdiagonal and `w` holds `V^T` with
/// `A = V T V^T`.
fn tridiagonalize<T: Real>(w: &mut DenseMatrix<T>, d: &mut [T], e: &mut [T]) {
    let n = d.len();
    if n == 0 {
        return;
    }
    let z = T::zero();
    for j in 0..n {
        d[j] = w[(j, n - 1)];
    }
    for i in (1..n).rev() {
        let scale = d[..i].iter().fold(z, |s, x| s + x.abs());
        let mut h = z;
        if scale == z {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = w[(j, i - 1)];
                w[(j, i)] = z;
                w[(i, j)] = z;
            }
        } else {
            for x in &mut d[..i] {
                *x = *x / scale;
                h = h + *x * *x;
            }
            let f = d[i - 1];
            let mut g = h.sqrt();
            if f > z {
                g = -g;
            }
            e[i] = scale * g;
            h = h - f * g;
            d[i - 1] = f - g;
            e[..i].iter_mut().for_each(|x| *x = z);

            for j in 0..i {
                let f = d[j];
                w[(i, j)] = f;
                let row = &w.row(j)[..i];
                let mut g = e[j] + row[j] * f;
                for k in (j + 1)..i {
                    g = g + row[k] * d[k];
                    e[k] = e[k] + row[k] * f;
                }
                e[j] = g;
            }
            let mut f = z;
            for j in 0..i {
                e[j] = e[j] / h;
                f = f + e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] = e[j] - hh * d[j];
            }
            for j in 0..i {
                let (f, g) = (d[j], e[j]);
                let row = &mut w.row_mut(j)[..i];
                for k in j..i {
                    row[k] = row[k] - (f * e[k] + g * d[k]);
                }
                d[j] = w[(j, i - 1)];
                w[(j, i)] = z;
            }
        }
        d[i] = h;
    }

    // Accumulate the transformations.
    for i in 0..n - 1 {
        w[(i, n - 1)] = w[(i, i)];
        w[(i, i)] = T::one();
        let h = d[i + 1];
        if h != z {
            let (head, tail) = w.as_mut_slice().split_at_mut((i + 1) * n);
            let next = &mut tail[..n];
            for k in 0..=i {
                d[k] = next[k] / h;
            }
            for j in 0..=i {
                let row = &mut head[j * n..j * n + i + 1];
                let g = row.iter().zip(&next[..=i]).fold(z, |s, (a, b)| s + *a * *b);
                for (x, &dk) in row.iter_mut().zip(&d[..=i]) {
                    *x = *x - g * dk;
                }
            }
        }
        w.row_mut(i + 1)[..=i].iter_mut().for_each(|x| *x = z);
    }
    for j in 0..n {
        d[j] = w[(j, n - 1)];
        w[(j, n - 1)] = z;
    }
    w[(n - 1, n - 1)] = T::one();
    e[0] = z;
}

/// Implicit QL with Wilkinson-style shifts on the tridiagonal `(d, e)`,
/// rotating the rows of `w`.
fn ql_implicit<T: Real>(w: &mut DenseMatrix<T>, d: &mut [T], e: &mut [T]) -> SolveReport {
    let n = d.len();
    let z = T::zero();
    let one = T::one();
    let two = one + one;
    let mut report = SolveReport {
        converged: true,
        ..SolveReport::default()
    };
    if n == 0 {
        return report;
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = z;

    let eps = T::epsilon();
    let mut f = z;
    let mut tst1 = z;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iters = 0;
            loop {
                iters += 1;
                report.sweeps += 1;
                if iters > MAX_QL_ITERS_PER_EIGENVALUE {
                    report.converged = false;
                    break;
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (two * e[l]);
                let mut r = p.hypot(one);
                if p < z {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for x in &mut d[l + 2..] {
                    *x = *x - h;
                }
                f = f + h;

                p = d[m];
                let mut c = one;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = z;
                let mut s2 = z;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    // Columns i, i+1 of V are rows i, i+1 of w.
                    let (head, tail) = w.as_mut_slice().split_at_mut((i + 1) * n);
                    let row_i = &mut head[i * n..];
                    let row_next = &mut tail[..n];
                    for (vi, vn) in row_i.iter_mut().zip(row_next.iter_mut()) {
                        let hk = *vn;
                        *vn = s * *vi + c * hk;
                        *vi = c * *vi - s * hk;
                    }
                    report.rotations += 1;
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if !(e[l].abs() > eps * tst1) {
                    break;
                }
            }
        }
        d[l] = d[l] + f;
        e[l] = z;
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::{eigen_residual, fro_norm, orthogonality_defect};

    fn check(a: &SymMatrix<f64>, tol: f64) {
        let r = symmetric_eig_ql(a);
        assert!(r.report.converged);
        assert!(orthogonality_defect(&r.v) <= tol);
        let res = eigen_residual(a, &r.v, &r.lambda);
        assert!(fro_norm(&res) <= tol * fro_norm(a.as_dense()).max(1.0));
    }

    #[test]
    fn small_cases() {
        check(&SymMatrix::diagonal(&[3.0]), 1e-15);
        check(&SymMatrix::diagonal(&[3.0, -1.0, 2.0]), 1e-15);
        check(&SymMatrix::from_rows(&[[2.0, 1.0], [1.0, 2.0]]).unwrap(), 1e-15);
        let a = SymMatrix::new(DenseMatrix::from_fn(7, 7, |i, j| 1.0 / (1.0 + i as f64 + j as f64))).unwrap();
        check(&a, 1e-14);
        // Already tridiagonal with a zero coupling in the middle.
        let t = SymMatrix::from_rows(&[
            [1.0, 2.0, 0.0, 0.0],
            [2.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 3.0, 1.0],
            [0.0, 0.0, 1.0, -2.0],
        ])
        .unwrap();
        check(&t, 1e-14);
    }

    #[test]
    fn eigenvalues_of_two_by_two() {
        let r = symmetric_eig_ql(&SymMatrix::from_rows(&[[2.0, 1.0], [1.0, 2.0]]).unwrap());
        let mut l = r.lambda;
        l.sort_by(f64::total_cmp);
        assert!((l[0] - 1.0).abs() < 1e-15 && (l[1] - 3.0).abs() < 1e-15);
    }
}
