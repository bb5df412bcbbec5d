//! Reproducible symmetric test matrices with a prescribed condition number.
//!
//! Randomness comes from ChaCha20 seeded with `seed`. Stream 0 drives the
//! orthogonal factor (normal reflector vectors, then row signs); stream 1
//! drives the signs of the interior eigenvalues. Normal variates use
//! `rand_distr::StandardNormal` (ziggurat), pinned by the crate version.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, SymMatrix};
use crate::orthogonalize::householder::house;

/// How the eigenvalue magnitudes fall from 1 to `1/kappa`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Geometric: `sigma_i = kappa^(-(i-1)/(n-1))`.
    Geo,
    /// Arithmetic: `sigma_i = 1 - (i-1)(1 - 1/kappa)/(n-1)`.
    Ari,
}

impl Mode {
    pub const ALL: [Mode; 2] = [Mode::Geo, Mode::Ari];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Geo => "geo",
            Mode::Ari => "ari",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "geo" | "geometric" => Ok(Mode::Geo),
            "ari" | "arithmetic" => Ok(Mode::Ari),
            _ => Err(Error::InvalidParameter(format!(
                "unknown mode `{s}` (expected geo or ari)"
            ))),
        }
    }
}

/// Recipe for one test matrix: `generate` is a pure function of it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestMatrixSpec {
    pub n: usize,
    pub kappa: f64,
    pub mode: Mode,
    pub seed: u64,
}

impl TestMatrixSpec {
    pub fn new(n: usize, kappa: f64, mode: Mode, seed: u64) -> Result<Self> {
        let spec = TestMatrixSpec { n, kappa, mode, seed };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidParameter(format!(
                "test matrices need n >= 2, got {}",
                self.n
            )));
        }
        if !(self.kappa >= 1.0) || !self.kappa.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "kappa must be finite and >= 1, got {}",
                self.kappa
            )));
        }
        Ok(())
    }
}

/// Eigenvalue magnitudes `sigma_1 = 1 >= ... >= sigma_n = 1/kappa`.
pub fn singular_value_profile(spec: &TestMatrixSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let n = spec.n;
    let last = (n - 1) as f64;
    let sigma = match spec.mode {
        Mode::Geo => {
            let factor = spec.kappa.powf(-1.0 / last);
            (0..n).map(|i| factor.powi(i as i32)).collect::<Vec<_>>()
        }
        Mode::Ari => {
            let drop = 1.0 - 1.0 / spec.kappa;
            (0..n).map(|i| 1.0 - i as f64 / last * drop).collect()
        }
    };
    let mut sigma = sigma;
    // Pin the endpoints; powi accumulates rounding at the far end.
    sigma[0] = 1.0;
    sigma[n - 1] = 1.0 / spec.kappa;
    Ok(sigma)
}

/// Haar-like random orthogonal matrix: `n - 1` Householder reflectors with
/// standard normal vectors applied to the identity, then random row signs.
pub fn random_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DenseMatrix<f64> {
    let mut q = DenseMatrix::<f64>::identity(n);
    for k in (0..n.saturating_sub(1)).rev() {
        let x: Vec<f64> = (k..n).map(|_| rng.sample(StandardNormal)).collect();
        // A zero draw has probability zero; skip it rather than fail.
        let Ok(h) = house(&x) else { continue };
        h.apply_left(&mut q, k, 0);
    }
    for i in 0..n {
        if rng.random::<bool>() {
            q.row_mut(i).iter_mut().for_each(|x| *x = -*x);
        }
    }
    q
}

fn stream(seed: u64, id: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Random signs for the interior eigenvalues (indices 2..n-1, 1-based).
pub fn interior_signs(spec: &TestMatrixSpec) -> Vec<f64> {
    let mut rng = stream(spec.seed, 1);
    let mut signs = vec![1.0; spec.n];
    if spec.n >= 3 {
        for s in &mut signs[1..spec.n - 1] {
            let u: f64 = rng.random();
            *s = if u < 0.5 { -1.0 } else { 1.0 };
        }
    }
    signs
}

/// Symmetric `A = Q diag(±sigma) Q^T`, exactly symmetrized.
pub fn generate(spec: &TestMatrixSpec) -> Result<SymMatrix<f64>> {
    let sigma = singular_value_profile(spec)?;
    let signed: Vec<f64> = sigma
        .iter()
        .zip(interior_signs(spec))
        .map(|(s, sign)| s * sign)
        .collect();
    let q = random_orthogonal(spec.n, &mut stream(spec.seed, 0));
    let a = q.scale_columns(&signed)?.matmul_t(&q)?;
    SymMatrix::symmetrized(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lu::determinant;
    use crate::norms::{fro_norm, orthogonality_defect};

    const UD: f64 = 1.110_223_024_625_156_5e-16;

    #[test]
    fn profile_examples() {
        let geo = TestMatrixSpec::new(2, 4.0, Mode::Geo, 0).unwrap();
        assert_eq!(singular_value_profile(&geo).unwrap(), vec![1.0, 0.25]);
        let ari = TestMatrixSpec::new(3, 2.0, Mode::Ari, 0).unwrap();
        assert_eq!(singular_value_profile(&ari).unwrap(), vec![1.0, 0.75, 0.5]);
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(TestMatrixSpec::new(1, 2.0, Mode::Geo, 0).is_err());
        assert!(TestMatrixSpec::new(5, 0.5, Mode::Geo, 0).is_err());
        assert!(TestMatrixSpec::new(5, f64::NAN, Mode::Ari, 0).is_err());
        let bad = TestMatrixSpec {
            n: 1,
            kappa: 2.0,
            mode: Mode::Geo,
            seed: 0,
        };
        assert!(singular_value_profile(&bad).is_err());
        assert!(generate(&bad).is_err());
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("GEO".parse::<Mode>().unwrap(), Mode::Geo);
        assert_eq!("ari".parse::<Mode>().unwrap(), Mode::Ari);
        assert!("lin".parse::<Mode>().is_err());
    }

    #[test]
    fn one_by_one_orthogonal_is_a_sign() {
        let q = random_orthogonal(1, &mut stream(3, 0));
        assert_eq!(q[(0, 0)].abs(), 1.0);
    }

    #[test]
    fn orthogonal_factor_quality() {
        for n in [2usize, 7, 30, 50] {
            let q = random_orthogonal(n, &mut stream(n as u64, 0));
            let tol = 16.0 * n as f64 * UD;
            assert!(orthogonality_defect(&q) <= tol);
            assert!((fro_norm(&q) - (n as f64).sqrt()).abs() <= tol * (n as f64).sqrt());
            assert!((determinant(&q).unwrap().abs() - 1.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn generation_is_deterministic_and_bit_symmetric() {
        let spec = TestMatrixSpec::new(12, 100.0, Mode::Geo, 42).unwrap();
        let a = generate(&spec).unwrap();
        let b = generate(&spec).unwrap();
        assert_eq!(a, b);
        for i in 0..12 {
            for j in 0..12 {
                assert_eq!(a[(i, j)].to_bits(), a[(j, i)].to_bits());
            }
        }
        let other = generate(&TestMatrixSpec { seed: 43, ..spec }).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn interior_signs_leave_endpoints_positive_and_flip_some() {
        let spec = TestMatrixSpec::new(40, 10.0, Mode::Ari, 5).unwrap();
        let s = interior_signs(&spec);
        assert_eq!(s[0], 1.0);
        assert_eq!(s[39], 1.0);
        assert!(s.iter().any(|&x| x < 0.0));
        let two = TestMatrixSpec::new(2, 10.0, Mode::Ari, 5).unwrap();
        assert_eq!(interior_signs(&two), vec![1.0, 1.0]);
    }
}
