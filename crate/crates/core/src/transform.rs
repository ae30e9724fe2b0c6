//! Exact Foldy-Wouthuysen transformations at fixed momentum.
//!
//! Three closed forms are provided: the massless Dirac operator
//! `(p + γ·p)/(√2 p)`, the photon operator `(p + βα·p)/(√2 p)` and the
//! generalized Feshbach-Villars operator
//! `(ε + N + ρ₁(ε − N))/(2√(εN)) ⊗ I`. Each carries its closed-form
//! inverse; [`TransformOp::numeric_inverse_residual`] compares it against
//! Gauss-Jordan inversion.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::momentum::{energy, Branch, Momentum};
use crate::operator::{kron, pseudo_adjoint, ComplexMatrix, Metric};
use crate::representation::{self, RepKind, RepSpec};
use crate::spin::{self, SpinRep};

/// A similarity transformation `ψ' = Uψ`, `A' = U A U⁻¹`.
#[derive(Debug, Clone)]
pub struct TransformOp {
    matrix: ComplexMatrix,
    inverse: ComplexMatrix,
    metric: Metric,
    source: RepSpec,
    target: RepSpec,
    momentum: Momentum,
    physical: ComplexMatrix,
}

impl TransformOp {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Closed-form inverse.
    pub fn inverse(&self) -> &ComplexMatrix {
        &self.inverse
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn source(&self) -> &RepSpec {
        &self.source
    }

    pub fn target(&self) -> &RepSpec {
        &self.target
    }

    pub fn momentum(&self) -> &Momentum {
        &self.momentum
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Projector onto the subspace where the transform's contracts hold
    /// (transverse fields for the photon, everything otherwise).
    pub fn physical_projector(&self) -> &ComplexMatrix {
        &self.physical
    }

    fn compress(&self, a: &ComplexMatrix) -> ComplexMatrix {
        &(&self.physical * a) * &self.physical
    }

    /// `‖P(g U† g U − I)P‖_max` on the physical subspace.
    pub fn pseudounitarity_residual(&self) -> f64 {
        let ud = pseudo_adjoint(&self.matrix, &self.metric).expect("dims agree");
        let prod = self.compress(&(&ud * &self.matrix));
        prod.dist_max(&self.physical)
    }

    /// `‖U⁻¹ − inv(U)‖_max` against numeric inversion.
    pub fn numeric_inverse_residual(&self) -> Result<f64> {
        Ok(self.inverse.dist_max(&self.matrix.inverse()?))
    }

    /// `‖U U⁻¹ − I‖_max` for the closed-form inverse.
    pub fn inverse_residual(&self) -> f64 {
        (&self.matrix * &self.inverse).dist_max(&ComplexMatrix::identity(self.dim()))
    }

    /// Transformed Hamiltonian `U H U⁻¹`.
    pub fn transformed_hamiltonian(&self) -> Result<ComplexMatrix> {
        apply_similarity(self, &representation::hamiltonian(&self.source, &self.momentum)?)
    }

    /// Largest entry of the transformed Hamiltonian coupling the upper and
    /// lower blocks, on the physical subspace.
    pub fn off_block_residual(&self) -> Result<f64> {
        let h = self.compress(&self.transformed_hamiltonian()?);
        Ok(off_block_max(&h))
    }

    /// `‖P(U H U⁻¹ − β⊗I ε)P‖_max`.
    pub fn fw_residual(&self) -> Result<f64> {
        let h = self.compress(&self.transformed_hamiltonian()?);
        let h_fw = self.compress(&representation::hamiltonian(&self.target, &self.momentum)?);
        Ok(h.dist_max(&h_fw))
    }
}

/// Largest entry in the off-diagonal blocks of a matrix split in halves.
pub fn off_block_max(a: &ComplexMatrix) -> f64 {
    let half = a.dim() / 2;
    let mut max: f64 = 0.0;
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            if (i < half) != (j < half) {
                max = max.max(a[(i, j)].norm());
            }
        }
    }
    max
}

fn fw_target(mass: f64, spin: SpinRep) -> RepSpec {
    RepSpec::foldy_wouthuysen(mass, spin).expect("validated source")
}

/// `U = (p + γ·p)/(√2 p)` for the massless Dirac Hamiltonian `α·p`.
pub fn fw_massless_dirac(p: &Momentum) -> Result<TransformOp> {
    let dir = p
        .direction()
        .map_err(|_| Error::ZeroMomentum("FW transform of a massless Dirac particle"))?;
    let d = spin::dirac_matrices();
    let id = ComplexMatrix::identity(4);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let gp = spin::dot(&d.gamma, dir);
    let matrix = (&id + &gp).scale_real(s);
    // γ·p̂ is anti-Hermitian with square −1, so U⁻¹ = U† = (1 − γ·p̂)/√2.
    let inverse = (&id - &gp).scale_real(s);
    Ok(TransformOp {
        matrix,
        inverse,
        metric: Metric::identity(4),
        source: RepSpec::dirac(0.0)?,
        target: fw_target(0.0, SpinRep::HALF),
        momentum: *p,
        physical: id,
    })
}

/// `U = (p + βα·p)/(√2 p)` for the Dirac-like photon Hamiltonian.
///
/// On longitudinal fields U reduces to `1/√2`, so the exact inverse is
/// `U†P_T + √2 P_L`.
pub fn fw_photon(p: &Momentum) -> Result<TransformOp> {
    let dir = p
        .direction()
        .map_err(|_| Error::ZeroMomentum("FW transform of a photon"))?;
    let beta = spin::photon_beta();
    let ap = spin::dot(&spin::photon_alpha_triple(), dir);
    let id = ComplexMatrix::identity(6);
    let matrix = (&id + &(&beta * &ap)).scale_real(std::f64::consts::FRAC_1_SQRT_2);
    let pt = representation::photon_transversality_projector(p)?;
    let pl = &id - &pt;
    let inverse = &(&matrix.adjoint() * &pt) + &pl.scale_real(std::f64::consts::SQRT_2);
    Ok(TransformOp {
        matrix,
        inverse,
        metric: Metric::identity(6),
        source: RepSpec::photon(),
        target: fw_target(0.0, SpinRep::ONE),
        momentum: *p,
        physical: pt,
    })
}

/// GFV→FW operator `(ε + N + ρ₁(ε − N))/(2√(εN)) ⊗ I_{2s+1}` with its
/// inverse `(ε + N − ρ₁(ε − N))/(2√(εN))`.
///
/// For `N < 0` the square root is taken as `√(ε|N|)` and the inverse picks
/// up the sign of N. The operator is then anti-pseudounitary
/// (`g U† g U = −I`): with negative N the positive-energy states carry
/// negative ρ₃-norm.
pub fn gfv_to_fw(mass: f64, n: f64, p: &Momentum, spin: SpinRep) -> Result<TransformOp> {
    let source = RepSpec::gfv(mass, spin, Some(n))?;
    gfv_like_to_fw(source, n, p)
}

fn gfv_like_to_fw(source: RepSpec, n: f64, p: &Momentum) -> Result<TransformOp> {
    source.check_momentum(p)?;
    let eps = energy(source.mass(), p);
    let norm = 2.0 * (eps * n.abs()).sqrt();
    let id2 = ComplexMatrix::identity(2);
    let rho1 = spin::pauli(1)?;
    let two = &id2.scale_real((eps + n) / norm) + &rho1.scale_real((eps - n) / norm);
    let two_inv = (&id2.scale_real((eps + n) / norm) - &rho1.scale_real((eps - n) / norm))
        .scale_real(n.signum());
    let block = source.block_dim();
    let ib = ComplexMatrix::identity(block);
    let dim = source.dim();
    Ok(TransformOp {
        matrix: kron(&two, &ib),
        inverse: kron(&two_inv, &ib),
        metric: Metric::rho3(block),
        source,
        target: fw_target(source.mass(), source.spin()),
        momentum: *p,
        physical: ComplexMatrix::identity(dim),
    })
}

/// Feshbach-Villars→FW: the GFV operator with `N = m`.
pub fn fv_to_fw(mass: f64, p: &Momentum) -> Result<TransformOp> {
    gfv_like_to_fw(RepSpec::feshbach_villars(mass)?, mass, p)
}

/// The FW transform appropriate to `rep` at `p`. FW maps to itself.
///
/// Massive Dirac particles have no closed form here.
pub fn transform_for(rep: &RepSpec, p: &Momentum) -> Result<TransformOp> {
    rep.check_momentum(p)?;
    match rep.kind() {
        RepKind::Dirac if rep.is_massless() => fw_massless_dirac(p),
        RepKind::Dirac => Err(Error::InvalidRepresentation(
            "the FW transform is implemented for massless Dirac particles only".into(),
        )),
        RepKind::DiracLikePhoton => fw_photon(p),
        RepKind::FeshbachVillars => fv_to_fw(rep.mass(), p),
        RepKind::GeneralizedFv => {
            gfv_like_to_fw(*rep, rep.n_at(p).expect("gfv"), p)
        }
        RepKind::FoldyWouthuysen => {
            let id = ComplexMatrix::identity(rep.dim());
            Ok(TransformOp {
                matrix: id.clone(),
                inverse: id.clone(),
                metric: Metric::identity(rep.dim()),
                source: *rep,
                target: *rep,
                momentum: *p,
                physical: id,
            })
        }
    }
}

/// `U a U⁻¹`.
pub fn apply_similarity(t: &TransformOp, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let ua = t.matrix.try_mul(a)?;
    ua.try_mul(&t.inverse)
}

/// `U⁻¹ a U`.
pub fn apply_inverse_similarity(t: &TransformOp, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let ua = t.inverse.try_mul(a)?;
    ua.try_mul(&t.matrix)
}

/// Relative size of the component of `psi` outside `branch`.
pub fn branch_impurity(rep: &RepSpec, p: &Momentum, psi: &[Complex64], branch: Branch) -> Result<f64> {
    if psi.len() != rep.dim() {
        return Err(Error::DimensionMismatch {
            left: rep.dim(),
            right: psi.len(),
        });
    }
    let proj = representation::branch_projectors(rep, p)?;
    let projected = proj.get(branch).mul_vec(psi);
    let scale = vec_norm(psi);
    if scale == 0.0 {
        return Err(Error::InvalidArgument("zero state".into()));
    }
    let diff: f64 = psi
        .iter()
        .zip(&projected)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok(diff / scale)
}

pub(crate) fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Tolerance on the out-of-branch fraction of a pure-branch state.
pub const BRANCH_PURITY_TOLERANCE: f64 = 1e-10;

/// FW wave function of a pure-branch state of the transform's source
/// representation.
///
/// For GFV and FV sources the printed block form is used: the upper
/// (positive branch) or lower (negative branch) GFV block times
/// `2√(εN)/(ε + N)`, the other block zero. Other sources use `Uψ`.
pub fn fw_wavefunction(t: &TransformOp, psi: &[Complex64], branch: Branch) -> Result<Vec<Complex64>> {
    let impurity = branch_impurity(&t.source, &t.momentum, psi, branch)?;
    if impurity > BRANCH_PURITY_TOLERANCE {
        return Err(Error::MixedBranch(branch.name(), impurity));
    }
    match t.source.kind() {
        RepKind::GeneralizedFv | RepKind::FeshbachVillars => {
            let n = t.source.n_at(&t.momentum).expect("gfv");
            let eps = energy(t.source.mass(), &t.momentum);
            let factor = branch_factor(eps, n);
            let block = t.source.block_dim();
            let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
            let range = match branch {
                Branch::Positive => 0..block,
                Branch::Negative => block..2 * block,
            };
            for i in range {
                out[i] = psi[i] * factor;
            }
            Ok(out)
        }
        _ => Ok(t.matrix.mul_vec(psi)),
    }
}

/// `2√(εN)/(ε + N)`, equal to 1 at `N = ε`. Uses `√(ε|N|)·sign(N)` for
/// negative N to stay consistent with [`gfv_to_fw`].
pub fn branch_factor(eps: f64, n: f64) -> f64 {
    2.0 * (eps * n.abs()).sqrt() * n.signum() / (eps + n)
}

/// Coefficients `((N + p)/(2√(pN)), (N − p)/(2√(pN)))` of the upper and
/// lower blocks of the GFV state obtained from the FW state `(φ, 0)`; for
/// `(0, χ)` the roles swap to `((N − p), (N + p))/(2√(pN))`.
pub fn gfv_wavefunction_coefficients(eps: f64, n: f64, branch: Branch) -> (f64, f64) {
    let d = 2.0 * (eps * n.abs()).sqrt() * n.signum();
    match branch {
        Branch::Positive => ((n + eps) / d, (n - eps) / d),
        Branch::Negative => ((n - eps) / d, (n + eps) / d),
    }
}
