//! The representation catalogue.
//!
//! For a representation and a momentum eigenvalue 𝔭 this module produces
//! the Hamiltonian, velocity and acceleration matrices, the metric and the
//! constraint and branch projectors. Spin-s generalized Feshbach-Villars
//! matrices are the two-component forms Kronecker-extended by `I_{2s+1}`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::momentum::{energy, Axis, Momentum};
use crate::operator::{commutator, eig_decompose, kron, ComplexMatrix, Metric, I};
use crate::spin::{self, SpinRep};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RepKind {
    Dirac,
    FeshbachVillars,
    GeneralizedFv,
    DiracLikePhoton,
    FoldyWouthuysen,
}

impl RepKind {
    pub const ALL: [RepKind; 5] = [
        RepKind::Dirac,
        RepKind::FeshbachVillars,
        RepKind::GeneralizedFv,
        RepKind::DiracLikePhoton,
        RepKind::FoldyWouthuysen,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RepKind::Dirac => "dirac",
            RepKind::FeshbachVillars => "fv",
            RepKind::GeneralizedFv => "gfv",
            RepKind::DiracLikePhoton => "photon",
            RepKind::FoldyWouthuysen => "fw",
        }
    }

    /// Spin used when the caller does not give one.
    pub fn default_spin(self) -> SpinRep {
        match self {
            RepKind::FeshbachVillars => SpinRep::ZERO,
            RepKind::DiracLikePhoton => SpinRep::ONE,
            _ => SpinRep::HALF,
        }
    }
}

impl fmt::Display for RepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RepKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dirac" => Ok(RepKind::Dirac),
            "fv" | "feshbach-villars" => Ok(RepKind::FeshbachVillars),
            "gfv" | "generalized-fv" => Ok(RepKind::GeneralizedFv),
            "photon" | "dirac-like-photon" => Ok(RepKind::DiracLikePhoton),
            "fw" | "foldy-wouthuysen" => Ok(RepKind::FoldyWouthuysen),
            other => Err(Error::InvalidRepresentation(format!(
                "unknown representation '{other}' (expected dirac, fv, gfv, photon or fw)"
            ))),
        }
    }
}

/// A validated representation instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepSpec {
    kind: RepKind,
    mass: f64,
    spin: SpinRep,
    gfv_n: Option<f64>,
}

impl RepSpec {
    /// Validating constructor. `gfv_n` is only meaningful for
    /// [`RepKind::GeneralizedFv`]; `None` selects the diagonalizing default
    /// `N = √(m² + 𝔭²)`, evaluated per momentum.
    pub fn new(kind: RepKind, mass: f64, spin: SpinRep, gfv_n: Option<f64>) -> Result<Self> {
        if !(mass.is_finite() && mass >= 0.0) {
            return Err(Error::InvalidRepresentation(format!(
                "mass must be finite and non-negative, got {mass}"
            )));
        }
        match kind {
            RepKind::Dirac if spin != SpinRep::HALF => {
                return Err(Error::InvalidRepresentation(
                    "the Dirac representation carries spin 1/2".into(),
                ))
            }
            RepKind::FeshbachVillars => {
                if mass <= 0.0 {
                    return Err(Error::InvalidRepresentation(
                        "Feshbach-Villars requires m > 0; use gfv for massless particles".into(),
                    ));
                }
                if spin != SpinRep::ZERO {
                    return Err(Error::InvalidRepresentation(
                        "the Feshbach-Villars representation carries spin 0".into(),
                    ));
                }
            }
            RepKind::DiracLikePhoton if mass != 0.0 || spin != SpinRep::ONE => {
                return Err(Error::InvalidRepresentation(
                    "the Dirac-like photon representation has m = 0 and s = 1".into(),
                ))
            }
            _ => {}
        }
        if let Some(n) = gfv_n {
            if kind != RepKind::GeneralizedFv {
                return Err(Error::InvalidRepresentation(format!(
                    "N is a parameter of gfv only, not {kind}"
                )));
            }
            if n == 0.0 || !n.is_finite() {
                return Err(Error::InvalidRepresentation(
                    "N must be nonzero (and finite)".into(),
                ));
            }
        }
        Ok(Self {
            kind,
            mass,
            spin,
            gfv_n,
        })
    }

    pub fn dirac(mass: f64) -> Result<Self> {
        Self::new(RepKind::Dirac, mass, SpinRep::HALF, None)
    }

    pub fn feshbach_villars(mass: f64) -> Result<Self> {
        Self::new(RepKind::FeshbachVillars, mass, SpinRep::ZERO, None)
    }

    pub fn gfv(mass: f64, spin: SpinRep, n: Option<f64>) -> Result<Self> {
        Self::new(RepKind::GeneralizedFv, mass, spin, n)
    }

    pub fn photon() -> Self {
        Self::new(RepKind::DiracLikePhoton, 0.0, SpinRep::ONE, None).expect("valid")
    }

    pub fn foldy_wouthuysen(mass: f64, spin: SpinRep) -> Result<Self> {
        Self::new(RepKind::FoldyWouthuysen, mass, spin, None)
    }

    pub fn kind(&self) -> RepKind {
        self.kind
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn spin(&self) -> SpinRep {
        self.spin
    }

    pub fn gfv_n(&self) -> Option<f64> {
        self.gfv_n
    }

    pub fn is_massless(&self) -> bool {
        self.mass == 0.0
    }

    /// Matrix dimension.
    pub fn dim(&self) -> usize {
        match self.kind {
            RepKind::Dirac => 4,
            RepKind::FeshbachVillars => 2,
            RepKind::DiracLikePhoton => 6,
            RepKind::GeneralizedFv | RepKind::FoldyWouthuysen => 2 * self.spin.multiplicity(),
        }
    }

    /// Size of one ρ-block (`2s + 1`; 3 for the photon's field blocks).
    pub fn block_dim(&self) -> usize {
        self.dim() / 2
    }

    /// GFV parameter in effect at `p` (FV is GFV with `N = m`).
    pub fn n_at(&self, p: &Momentum) -> Option<f64> {
        match self.kind {
            RepKind::GeneralizedFv => Some(self.gfv_n.unwrap_or_else(|| energy(self.mass, p))),
            RepKind::FeshbachVillars => Some(self.mass),
            _ => None,
        }
    }

    /// Copy with the momentum-dependent default N frozen at `p`.
    pub fn resolved_at(&self, p: &Momentum) -> Self {
        let mut out = *self;
        if self.kind == RepKind::GeneralizedFv {
            out.gfv_n = self.n_at(p);
        }
        out
    }

    /// Rejects non-finite momenta and the massless zero-momentum state.
    pub fn check_momentum(&self, p: &Momentum) -> Result<()> {
        if !p.0.iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidArgument("momentum components must be finite".into()));
        }
        if self.is_massless() && p.is_zero() {
            return Err(Error::ZeroMomentum("massless state at zero momentum"));
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        let mut s = format!("{}(m={}, s={}", self.kind, self.mass, self.spin.value());
        if let Some(n) = self.gfv_n {
            s.push_str(&format!(", N={n}"));
        }
        s.push(')');
        s
    }
}

fn rho(i: usize) -> ComplexMatrix {
    spin::pauli(i).expect("valid index")
}

/// `ρ₃ + iρ₂ = [[1, 1], [−1, −1]]`.
fn rho3_plus_i_rho2() -> ComplexMatrix {
    &rho(3) + &rho(2).scale(I)
}

fn extend(rep: &RepSpec, two: ComplexMatrix) -> ComplexMatrix {
    let block = rep.block_dim();
    if block == 1 {
        two
    } else {
        kron(&two, &ComplexMatrix::identity(block))
    }
}

/// The free Hamiltonian at momentum `p`.
pub fn hamiltonian(rep: &RepSpec, p: &Momentum) -> Result<ComplexMatrix> {
    rep.check_momentum(p)?;
    let m = rep.mass;
    let p2 = p.norm_sqr();
    Ok(match rep.kind {
        RepKind::Dirac => {
            let d = spin::dirac_matrices();
            &d.beta.scale_real(m) + &spin::dot(&d.alpha, p.0)
        }
        RepKind::FeshbachVillars => {
            &rho(3).scale_real(m) + &rho3_plus_i_rho2().scale_real(p2 / (2.0 * m))
        }
        RepKind::GeneralizedFv => {
            let n = rep.n_at(p).expect("gfv");
            let e2 = p2 + m * m;
            let two = &rho(3).scale_real((e2 + n * n) / (2.0 * n))
                + &rho(2).scale(I * ((e2 - n * n) / (2.0 * n)));
            extend(rep, two)
        }
        RepKind::DiracLikePhoton => spin::dot(&spin::photon_alpha_triple(), p.0),
        RepKind::FoldyWouthuysen => extend(rep, rho(3).scale_real(energy(m, p))),
    })
}

/// Velocity operators `∂H/∂p_i` (equal to `i[H, r_i]`), one per axis.
pub fn velocity_operator(rep: &RepSpec, p: &Momentum) -> Result<[ComplexMatrix; 3]> {
    rep.check_momentum(p)?;
    Ok(match rep.kind {
        RepKind::Dirac => spin::dirac_matrices().alpha,
        RepKind::FeshbachVillars => {
            let k = rho3_plus_i_rho2();
            p.0.map(|pi| k.scale_real(pi / rep.mass))
        }
        RepKind::GeneralizedFv => {
            let n = rep.n_at(p).expect("gfv");
            let k = extend(rep, rho3_plus_i_rho2());
            p.0.map(|pi| k.scale_real(pi / n))
        }
        RepKind::DiracLikePhoton => spin::photon_alpha_triple(),
        RepKind::FoldyWouthuysen => {
            let e = energy(rep.mass, p);
            let beta = extend(rep, rho(3));
            p.0.map(|pi| beta.scale_real(pi / e))
        }
    })
}

pub fn velocity_component(rep: &RepSpec, p: &Momentum, axis: Axis) -> Result<ComplexMatrix> {
    let [vx, vy, vz] = velocity_operator(rep, p)?;
    Ok(match axis {
        Axis::X => vx,
        Axis::Y => vy,
        Axis::Z => vz,
    })
}

/// Acceleration operators `i[H, v_i]`, with the residual of the identity
/// `i[H, v_i] = 2i(p_i − v_i H)` measured on the physical subspace.
#[derive(Debug, Clone)]
pub struct Acceleration {
    pub operators: [ComplexMatrix; 3],
    pub identity_residual: f64,
}

pub fn acceleration_operator(rep: &RepSpec, p: &Momentum) -> Result<Acceleration> {
    let h = hamiltonian(rep, p)?;
    let v = velocity_operator(rep, p)?;
    let proj = physical_projector(rep, p)?;
    let id = ComplexMatrix::identity(rep.dim());
    let mut residual: f64 = 0.0;
    let mut ops = Vec::with_capacity(3);
    for (vi, &pi) in v.iter().zip(&p.0) {
        let acc = commutator(&h, vi)?.scale(I);
        let rhs = (&id.scale_real(pi) - &(vi * &h)).scale(I * 2.0);
        let diff = &(&proj * &(&acc - &rhs)) * &proj;
        residual = residual.max(diff.max_abs());
        ops.push(acc);
    }
    let operators: [ComplexMatrix; 3] = ops.try_into().expect("three axes");
    Ok(Acceleration {
        operators,
        identity_residual: residual,
    })
}

/// Normalization metric: `ρ₃ ⊗ I_{2s+1}` for FV and GFV, identity otherwise.
pub fn metric(rep: &RepSpec) -> Metric {
    match rep.kind {
        RepKind::FeshbachVillars | RepKind::GeneralizedFv => Metric::rho3(rep.block_dim()),
        _ => Metric::identity(rep.dim()),
    }
}

/// 3×3 transverse projector `I − p̂p̂ᵀ`.
pub fn transversality_projector(p: &Momentum) -> Result<ComplexMatrix> {
    let d = p
        .direction()
        .map_err(|_| Error::ZeroMomentum("transversality needs a momentum direction"))?;
    Ok(ComplexMatrix::from_fn(3, |i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        Complex64::new(delta - d[i] * d[j], 0.0)
    }))
}

/// 6×6 transverse projector acting on both field blocks.
pub fn photon_transversality_projector(p: &Momentum) -> Result<ComplexMatrix> {
    let t = transversality_projector(p)?;
    Ok(kron(&ComplexMatrix::identity(2), &t))
}

/// Projector onto the physical subspace: transverse fields for the photon,
/// the whole space otherwise.
pub fn physical_projector(rep: &RepSpec, p: &Momentum) -> Result<ComplexMatrix> {
    rep.check_momentum(p)?;
    match rep.kind {
        RepKind::DiracLikePhoton => photon_transversality_projector(p),
        _ => Ok(ComplexMatrix::identity(rep.dim())),
    }
}

/// Spectral projectors onto the positive and negative energy branches.
#[derive(Debug, Clone)]
pub struct BranchProjectors {
    pub positive: ComplexMatrix,
    pub negative: ComplexMatrix,
}

impl BranchProjectors {
    pub fn get(&self, branch: crate::momentum::Branch) -> &ComplexMatrix {
        match branch {
            crate::momentum::Branch::Positive => &self.positive,
            crate::momentum::Branch::Negative => &self.negative,
        }
    }
}

/// Branch projectors from the eigendecomposition of H.
///
/// The projectors use the dual (left) eigenvectors `V⁻¹`, so they are
/// oblique for the pseudo-Hermitian FV/GFV Hamiltonians and self-adjoint
/// with respect to the metric. Zero modes (the photon's longitudinal
/// fields) belong to neither branch.
pub fn branch_projectors(rep: &RepSpec, p: &Momentum) -> Result<BranchProjectors> {
    let h = hamiltonian(rep, p)?;
    let eig = eig_decompose(&h)?;
    let zero_tol = 1e-8 * h.max_abs().max(1.0);
    Ok(BranchProjectors {
        positive: eig.projector(|l| l.re > zero_tol),
        negative: eig.projector(|l| l.re < -zero_tol),
    })
}

/// Largest deviation of the physical-subspace spectrum from `±√(m² + 𝔭²)`.
///
/// Also fails if the branches are unbalanced or the photon does not have
/// exactly two longitudinal zero modes.
pub fn dispersion_residual(rep: &RepSpec, p: &Momentum) -> Result<f64> {
    let h = hamiltonian(rep, p)?;
    let eig = eig_decompose(&h)?;
    let e = energy(rep.mass, p);
    let mut residual: f64 = 0.0;
    let (mut pos, mut neg, mut zero) = (0usize, 0usize, 0usize);
    for l in &eig.values {
        residual = residual.max(l.im.abs());
        if rep.kind == RepKind::DiracLikePhoton && l.re.abs() < 0.5 * e {
            zero += 1;
            residual = residual.max(l.re.abs());
        } else if l.re > 0.0 {
            pos += 1;
            residual = residual.max((l.re - e).abs());
        } else {
            neg += 1;
            residual = residual.max((l.re + e).abs());
        }
    }
    let expected_zero = if rep.kind == RepKind::DiracLikePhoton { 2 } else { 0 };
    if pos != neg || zero != expected_zero {
        return Ok(f64::INFINITY);
    }
    Ok(residual)
}
