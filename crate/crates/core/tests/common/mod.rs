//! Test-only oracles, independent of the solvers under test.
#![allow(dead_code)]

use mpjacobi_core::{DenseMatrix, SymMatrix};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub const U_D: f64 = 1.0 / 9_007_199_254_740_992.0; // 2^-53
pub const U_L: f64 = 1.0 / 16_777_216.0; // 2^-24

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Symmetric matrix with standard normal entries on and above the diagonal.
pub fn random_symmetric<R: Rng>(rng: &mut R, n: usize) -> SymMatrix<f64> {
    let mut m = DenseMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let x: f64 = rng.sample(StandardNormal);
            m[(i, j)] = x;
            m[(j, i)] = x;
        }
    }
    SymMatrix::new(m).unwrap()
}

pub fn random_dense<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> DenseMatrix<f64> {
    DenseMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// Determinant by Gaussian elimination with partial pivoting.
fn det(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut d = 1.0;
    for k in 0..n {
        let piv = (k..n).max_by(|&a, &b| m[a][k].abs().total_cmp(&m[b][k].abs())).unwrap();
        if m[piv][k] == 0.0 {
            return 0.0;
        }
        if piv != k {
            m.swap(piv, k);
            d = -d;
        }
        d *= m[k][k];
        let (top, bottom) = m.split_at_mut(k + 1);
        let pivot = &top[k];
        for row in bottom {
            let l = row[k] / pivot[k];
            for (x, p) in row[k..].iter_mut().zip(&pivot[k..]) {
                *x -= l * p;
            }
        }
    }
    d
}

/// Number of eigenvalues of `a` below `x`: sign changes along the leading
/// principal minors of the characteristic matrix `A - x I`.
fn count_below(a: &SymMatrix<f64>, x: f64) -> usize {
    let n = a.order();
    let mut changes = 0;
    let mut prev = 1.0f64;
    for k in 1..=n {
        let sub: Vec<Vec<f64>> = (0..k)
            .map(|i| (0..k).map(|j| a[(i, j)] - if i == j { x } else { 0.0 }).collect())
            .collect();
        let mut d = det(sub);
        if d == 0.0 {
            d = f64::MIN_POSITIVE;
        }
        if (d < 0.0) != (prev < 0.0) {
            changes += 1;
        }
        prev = d;
    }
    changes
}

/// Ascending eigenvalues by bisection on the eigenvalue count.
pub fn oracle_eigenvalues(a: &SymMatrix<f64>) -> Vec<f64> {
    let n = a.order();
    // Gershgorin bounds.
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..n {
        let r: f64 = (0..n).filter(|&j| j != i).map(|j| a[(i, j)].abs()).sum();
        lo = lo.min(a[(i, i)] - r);
        hi = hi.max(a[(i, i)] + r);
    }
    let pad = 0.01 * lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
    lo -= pad;
    hi += pad;
    (0..n)
        .map(|k| {
            // Smallest x with count_below(x) > k.
            let (mut a_lo, mut a_hi) = (lo, hi);
            for _ in 0..200 {
                let mid = 0.5 * (a_lo + a_hi);
                if mid <= a_lo || mid >= a_hi {
                    break;
                }
                if count_below(a, mid) > k {
                    a_hi = mid;
                } else {
                    a_lo = mid;
                }
            }
            0.5 * (a_lo + a_hi)
        })
        .collect()
}

/// `||M||_2` of a small matrix as the square root of the largest eigenvalue of
/// `M^T M`, through the bisection oracle.
pub fn oracle_two_norm(m: &DenseMatrix<f64>) -> f64 {
    let scale = m.max_abs();
    if scale == 0.0 {
        return 0.0;
    }
    let m = m.scale(1.0 / scale);
    let g = SymMatrix::symmetrized(m.t_matmul(&m).unwrap()).unwrap();
    scale * oracle_eigenvalues(&g).last().copied().unwrap_or(0.0).max(0.0).sqrt()
}
