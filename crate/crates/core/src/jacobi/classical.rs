//! Classical Jacobi: always rotate the largest off-diagonal entry.

use super::givens::{pair_unchecked, rotate_sym_unchecked, rotate_transposed, GivensPair};
use super::{SolveReport, SpectralResult};
use crate::matrix::{DenseMatrix, SymMatrix};
use crate::norms::{off_norm, two_norm_estimate, TWO_NORM_ITERS};
use crate::precision::Real;

/// Default rotation budget, in units of `n(n-1)/2` rotations.
pub const DEFAULT_ROTATION_CAP_SWEEPS: usize = 30;

/// Position `(p, q)`, `p < q`, of a largest off-diagonal `|a_pq|`.
///
/// Ties go to the smallest `q`, then the smallest `p`. A diagonal matrix
/// gives `(0, 1)`. Needs `n >= 2`.
pub fn max_off<T: Real>(a: &SymMatrix<T>) -> (usize, usize) {
    max_off_slice(a.as_slice(), a.order())
}

fn max_off_slice<T: Real>(a: &[T], n: usize) -> (usize, usize) {
    debug_assert!(n >= 2);
    let mut best = (T::zero(), 0usize, 1usize);
    for p in 0..n - 1 {
        let row = &a[p * n + p + 1..(p + 1) * n];
        let m = max_abs(row);
        if m < best.0 {
            continue;
        }
        let q = p + 1 + row.iter().position(|x| x.abs() == m).unwrap_or(0);
        if m > best.0 || q < best.2 {
            best = (m, p, q);
        }
    }
    (best.1, best.2)
}

/// `max |x|`, unrolled so the compiler can vectorize it.
fn max_abs<T: Real>(xs: &[T]) -> T {
    const LANES: usize = 8;
    let mut acc = [T::zero(); LANES];
    let chunks = xs.chunks_exact(LANES);
    let rest = chunks.remainder();
    for c in chunks {
        for l in 0..LANES {
            let v = c[l].abs();
            acc[l] = if v > acc[l] { v } else { acc[l] };
        }
    }
    let mut m = rest
        .iter()
        .fold(T::zero(), |m, x| if x.abs() > m { x.abs() } else { m });
    for v in acc {
        if v > m {
            m = v;
        }
    }
    m
}

/// Classical Jacobi with the default rotation budget.
pub fn jacobi_classical<T: Real>(a: &SymMatrix<T>, tol: T) -> SpectralResult<T> {
    let n = a.order();
    let cap = DEFAULT_ROTATION_CAP_SWEEPS * (n * n.saturating_sub(1) / 2).max(1);
    jacobi_classical_observed(a, tol, cap, |_, _| {})
}

/// Classical Jacobi calling `observe(A, g)` after every rotation `g`.
///
/// Stops when the largest entry fails `|a_pq| > tol ||A||_2 sqrt(|a_pp a_qq|)`,
/// with `||A||_2` estimated once on entry, or after `max_rotations`
/// rotations with `converged = false`. The working copy is re-symmetrized
/// every `n^2` rotations.
pub fn jacobi_classical_observed<T, F>(
    a: &SymMatrix<T>,
    tol: T,
    max_rotations: usize,
    mut observe: F,
) -> SpectralResult<T>
where
    T: Real,
    F: FnMut(&SymMatrix<T>, &GivensPair<T>),
{
    let n = a.order();
    let mut work = a.clone();
    let mut vt = DenseMatrix::<T>::identity(n);
    let mut report = SolveReport::default();
    let per_sweep = n * n.saturating_sub(1) / 2;
    let threshold = tol * T::from_f64(two_norm_estimate(a, TWO_NORM_ITERS));

    loop {
        if n < 2 {
            report.converged = true;
            break;
        }
        if report.rotations % (n * n) == 0 {
            work.symmetrize();
        }
        let (p, q) = max_off(&work);
        let s = work.as_slice();
        let apq = s[p * n + q];
        if !(apq.abs() > threshold * (s[p * n + p] * s[q * n + q]).abs().sqrt()) {
            work.zero_off_diagonal();
            report.converged = true;
            break;
        }
        if report.rotations == max_rotations {
            break;
        }
        let g = pair_unchecked(s, n, p, q);
        let data = work.as_mut_slice();
        rotate_sym_unchecked(data, n, &g);
        data[p * n + q] = T::zero();
        data[q * n + p] = T::zero();
        rotate_transposed(vt.as_mut_slice(), n, &g);
        report.rotations += 1;
        if report.rotations % per_sweep == 0 {
            report.sweeps += 1;
            report.off_history.push(off_norm(&work));
        }
        observe(&work, &g);
    }

    SpectralResult {
        v: vt.transpose(),
        lambda: work.diag(),
        report,
    }
}
