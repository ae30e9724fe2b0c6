//! Dense complex matrix algebra with indefinite-metric structure.

mod eigen;
mod expm;
mod matrix;

pub use eigen::{eig_decompose, eigenvalues, fix_phase, EigenDecomposition, MAX_EIGENVECTOR_CONDITION};
pub use expm::{exp_scaling_squaring, mat_exp, ExpPropagator, SPECTRAL_EXP_CONDITION_LIMIT};
pub use matrix::ComplexMatrix;

pub(crate) use matrix::{I, ONE, ZERO};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default absolute tolerance for max-entry matrix comparisons.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Diagonal ±1 metric `g` (so `g² = I`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Metric {
    signs: Vec<i8>,
}

impl Metric {
    pub fn identity(dim: usize) -> Self {
        Self {
            signs: vec![1; dim],
        }
    }

    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidArgument(
                "metric diagonal entries must be +1 or -1".into(),
            ));
        }
        Ok(Self { signs })
    }

    /// `ρ₃ ⊗ I_block`: `block` plus signs followed by `block` minus signs.
    pub fn rho3(block: usize) -> Self {
        let mut signs = vec![1; block];
        signs.extend(std::iter::repeat_n(-1, block));
        Self { signs }
    }

    pub fn dim(&self) -> usize {
        self.signs.len()
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn is_identity(&self) -> bool {
        self.signs.iter().all(|&s| s == 1)
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let diag: Vec<Complex64> = self
            .signs
            .iter()
            .map(|&s| Complex64::new(f64::from(s), 0.0))
            .collect();
        ComplexMatrix::from_diagonal(&diag)
    }

    /// `g·a·g`, i.e. flips the sign of entries connecting opposite-sign slots.
    pub fn sandwich(&self, a: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::from_fn(a.dim(), |i, j| {
            a[(i, j)] * f64::from(self.signs[i] * self.signs[j])
        })
    }

    /// Indefinite inner product `⟨x, y⟩_g = x† g y`.
    pub fn inner(&self, x: &[Complex64], y: &[Complex64]) -> Complex64 {
        x.iter()
            .zip(y)
            .zip(&self.signs)
            .map(|((a, b), &s)| a.conj() * b * f64::from(s))
            .sum()
    }
}

fn ensure_same_dim(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left: a, right: b })
    }
}

/// `[a, b] = ab − ba`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    ensure_same_dim(a.dim(), b.dim())?;
    Ok(&(a * b) - &(b * a))
}

/// `{a, b} = ab + ba`.
pub fn anticommutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    ensure_same_dim(a.dim(), b.dim())?;
    Ok(&(a * b) + &(b * a))
}

/// Kronecker product; `a ⊗ b` has dimension `a.dim() · b.dim()`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (na, nb) = (a.dim(), b.dim());
    ComplexMatrix::from_fn(na * nb, |i, j| a[(i / nb, j / nb)] * b[(i % nb, j % nb)])
}

/// Pseudo-adjoint `a‡ = g a† g`.
pub fn pseudo_adjoint(a: &ComplexMatrix, g: &Metric) -> Result<ComplexMatrix> {
    ensure_same_dim(a.dim(), g.dim())?;
    Ok(g.sandwich(&a.adjoint()))
}

/// `‖g u† g u − I‖_max`.
pub fn pseudo_unitarity_residual(u: &ComplexMatrix, g: &Metric) -> Result<f64> {
    let ud = pseudo_adjoint(u, g)?;
    Ok((&ud * u).dist_max(&ComplexMatrix::identity(u.dim())))
}

/// True iff `‖g u† g u − I‖_max ≤ tol`.
pub fn is_pseudo_unitary(u: &ComplexMatrix, g: &Metric, tol: f64) -> Result<bool> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    Ok(pseudo_unitarity_residual(u, g)? <= tol)
}
