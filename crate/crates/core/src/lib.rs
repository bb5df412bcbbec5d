//! Dense symmetric eigensolvers built around Jacobi rotations, including a
//! mixed-precision pipeline that preconditions the binary64 solve with a
//! binary32 one.
//!
//! ```
//! use mpjacobi_core::{generate, solve_mixed, Mode, TestMatrixSpec};
//!
//! let a = generate(&TestMatrixSpec::new(40, 100.0, Mode::Geo, 7).unwrap()).unwrap();
//! let r = solve_mixed(&a, f64::EPSILON / 2.0, 10).unwrap();
//! assert!(r.residual_ratio <= 40.0 * f64::EPSILON / 2.0);
//! ```

// Negated comparisons are deliberate: NaN must fail convergence and
// parameter checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod io;
pub mod jacobi;
pub mod lu;
pub mod matrix;
pub mod mixed;
pub mod norms;
pub mod orthogonalize;
pub mod precision;
pub mod testmat;
pub mod tridiagonal;

pub use error::{Error, Result};
pub use jacobi::{
    apply_rotation_right, apply_rotation_sym, jacobi_classical, jacobi_classical_observed, jacobi_cyclic, jacobi_pair,
    max_off, sort_permutation, sorted_eigenvalues, GivensPair, SolveReport, SpectralResult,
};
pub use matrix::{demote, demote_sym, promote, promote_sym, DenseMatrix, SymMatrix};
pub use mixed::{
    low_precision_eig, low_precision_eig_with, precondition, solve_mixed, solve_mixed_with, solve_unpreconditioned,
    LowPrecisionBackend, LowPrecisionEig, MixedOptions, MixedSolveResult, StageTimings,
};
pub use norms::{fro_norm, off_norm, orthogonality_defect, spectral_norm_estimate, two_norm_estimate};
pub use orthogonalize::{
    house, householder_qr, newton_schulz, newton_schulz_step, polar_newton, HouseholderReflector, PolarFactor,
    QrFactors,
};
pub use precision::{Precision, Real};
pub use testmat::{generate, random_orthogonal, singular_value_profile, Mode, TestMatrixSpec};
