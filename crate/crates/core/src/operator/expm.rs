use num_complex::Complex64;

use super::eigen::{eig_decompose, EigenDecomposition};
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Eigenbases better conditioned than this are used directly for `exp`.
pub const SPECTRAL_EXP_CONDITION_LIMIT: f64 = 1e6;

/// Reusable `exp(s·A)` evaluator.
///
/// Evolution code evaluates the same Hamiltonian at many times, so the
/// eigendecomposition is computed once and reused. When the eigenbasis is
/// too ill-conditioned (or the decomposition fails) every call falls back
/// to scaling and squaring.
#[derive(Debug, Clone)]
pub struct ExpPropagator {
    generator: ComplexMatrix,
    spectral: Option<EigenDecomposition>,
}

impl ExpPropagator {
    pub fn new(generator: &ComplexMatrix) -> Result<Self> {
        if !generator.is_finite() {
            return Err(Error::NonFinite);
        }
        let spectral = eig_decompose(generator)
            .ok()
            .filter(|e| e.condition < SPECTRAL_EXP_CONDITION_LIMIT);
        Ok(Self {
            generator: generator.clone(),
            spectral,
        })
    }

    pub fn generator(&self) -> &ComplexMatrix {
        &self.generator
    }

    pub fn decomposition(&self) -> Option<&EigenDecomposition> {
        self.spectral.as_ref()
    }

    pub fn uses_spectral_path(&self) -> bool {
        self.spectral.is_some()
    }

    /// `exp(scale · A)`.
    pub fn exp(&self, scale: Complex64) -> Result<ComplexMatrix> {
        let out = match &self.spectral {
            Some(eig) => eig.apply_fn(|l| (scale * l).exp()),
            None => exp_scaling_squaring(&self.generator.scale(scale)),
        };
        if out.is_finite() {
            Ok(out)
        } else {
            Err(Error::NonFinite)
        }
    }
}

/// `exp(scale · a)`.
pub fn mat_exp(a: &ComplexMatrix, scale: Complex64) -> Result<ComplexMatrix> {
    ExpPropagator::new(a)?.exp(scale)
}

/// Scaling and squaring with a truncated Taylor series on the scaled
/// matrix (‖B‖₁ ≤ 1/2, 20 terms: truncation below 1e-25).
pub fn exp_scaling_squaring(b: &ComplexMatrix) -> ComplexMatrix {
    let n = b.dim();
    let norm = b.norm_one();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = b.scale_real(0.5f64.powi(squarings));
    let mut term = ComplexMatrix::identity(n);
    let mut sum = ComplexMatrix::identity(n);
    for k in 1..=20 {
        term = (&term * &scaled).scale_real(1.0 / k as f64);
        sum = &sum + &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}
