//! Floating-point precision levels and the scalar trait the kernels are generic over.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::Float;

/// The two arithmetic levels of the mixed-precision pipeline.
///
/// `Low` is IEEE binary32, `Working` is IEEE binary64.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Precision {
    Low,
    Working,
}

impl Precision {
    /// Unit roundoff `u`: half the spacing of floating-point numbers at 1.
    pub const fn unit_roundoff(self) -> f64 {
        match self {
            // 2^-24
            Precision::Low => 5.960_464_477_539_063e-8,
            // 2^-53
            Precision::Working => 1.110_223_024_625_156_5e-16,
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            Precision::Low => "binary32",
            Precision::Working => "binary64",
        }
    }
}

/// Scalar element type of a matrix: `f32` (low precision) or `f64` (working precision).
pub trait Real: Float + Sum + Debug + Display + LowerExp + Default + Send + Sync + 'static {
    const PRECISION: Precision;

    fn from_f64(x: f64) -> Self;
    fn as_f64(self) -> f64;

    /// Unit roundoff of this type, as a value of this type.
    fn unit_roundoff() -> Self {
        Self::from_f64(Self::PRECISION.unit_roundoff())
    }

    /// `C <- alpha * A * B + beta * C` on strided storage.
    ///
    /// # Safety
    /// The pointers and strides must describe valid, non-overlapping (for `c`)
    /// `m x k`, `k x n` and `m x n` matrices.
    #[allow(clippy::too_many_arguments)]
    unsafe fn gemm(
        m: usize,
        k: usize,
        n: usize,
        alpha: Self,
        a: *const Self,
        rsa: isize,
        csa: isize,
        b: *const Self,
        rsb: isize,
        csb: isize,
        beta: Self,
        c: *mut Self,
        rsc: isize,
        csc: isize,
    );
}

impl Real for f32 {
    const PRECISION: Precision = Precision::Low;

    #[inline]
    fn from_f64(x: f64) -> Self {
        x as f32
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self as f64
    }

    unsafe fn gemm(
        m: usize,
        k: usize,
        n: usize,
        alpha: Self,
        a: *const Self,
        rsa: isize,
        csa: isize,
        b: *const Self,
        rsb: isize,
        csb: isize,
        beta: Self,
        c: *mut Self,
        rsc: isize,
        csc: isize,
    ) {
        matrixmultiply::sgemm(m, k, n, alpha, a, rsa, csa, b, rsb, csb, beta, c, rsc, csc);
    }
}

impl Real for f64 {
    const PRECISION: Precision = Precision::Working;

    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self
    }

    unsafe fn gemm(
        m: usize,
        k: usize,
        n: usize,
        alpha: Self,
        a: *const Self,
        rsa: isize,
        csa: isize,
        b: *const Self,
        rsb: isize,
        csb: isize,
        beta: Self,
        c: *mut Self,
        rsc: isize,
        csc: isize,
    ) {
        matrixmultiply::dgemm(m, k, n, alpha, a, rsa, csa, b, rsb, csb, beta, c, rsc, csc);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_roundoffs_are_exact_powers_of_two() {
        assert_eq!(Precision::Low.unit_roundoff(), 2f64.powi(-24));
        assert_eq!(Precision::Working.unit_roundoff(), 2f64.powi(-53));
        assert_eq!(Precision::Low.unit_roundoff(), f32::EPSILON as f64 / 2.0);
        assert_eq!(Precision::Working.unit_roundoff(), f64::EPSILON / 2.0);
        assert_eq!(<f32 as Real>::unit_roundoff(), f32::EPSILON / 2.0);
    }
}
