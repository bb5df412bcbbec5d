//! Orthogonalization of nearly orthogonal matrices.

pub mod householder;
pub mod polar;

pub use householder::{house, householder_qr, HouseholderReflector, QrFactors};
pub use polar::{
    newton_schulz, newton_schulz_scalar, newton_schulz_step, newton_schulz_steps, polar_newton, polar_newton_step,
    PolarFactor, NEWTON_SCHULZ_GUARD, NEWTON_SCHULZ_THRESHOLD,
};
