//! Heisenberg-picture evolution of the velocity and displacement operators.
//!
//! The closed forms are
//!
//! ```text
//! v(t)  = (v₀ − p H⁻¹) e^{−2iHt} + p H⁻¹
//! Δr(t) = p H⁻¹ t + (v₀ − p H⁻¹) (i/2) H⁻¹ (e^{−2iHt} − I)
//! ```
//!
//! with every H-dependent factor multiplied from the right. They follow
//! from `{v₀, H} = 2p`, which makes `v₀ − pH⁻¹` anticommute with H. The
//! brute-force oracle is `e^{iHt} v₀ e^{−iHt}`.
//!
//! For the photon H annihilates the longitudinal fields and α leaks out
//! of the transverse subspace, so the closed forms hold for the operators
//! compressed to that subspace, `P v P`, with H⁻¹ the inverse on it.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::momentum::{energy, Axis, Branch, Momentum};
use crate::operator::{eig_decompose, ComplexMatrix, EigenDecomposition, ExpPropagator, I};
use crate::representation::{self, RepSpec};

/// Eigenvalues smaller than this (relative to ‖H‖) count as the null space.
const NULL_EIGENVALUE_TOLERANCE: f64 = 1e-10;

/// Default quadrature tolerance for the displacement cross-check.
pub const QUADRATURE_TOLERANCE: f64 = 1e-11;

/// Closed-form evolution at one `(rep, 𝔭, axis)`.
#[derive(Debug, Clone)]
pub struct ClosedForm {
    rep: RepSpec,
    momentum: Momentum,
    axis: Axis,
    eig: EigenDecomposition,
    projector: ComplexMatrix,
    v0: ComplexMatrix,
    drift: ComplexMatrix,
    bracket: ComplexMatrix,
    h_inv: ComplexMatrix,
}

impl ClosedForm {
    pub fn new(rep: &RepSpec, p: &Momentum, axis: Axis) -> Result<Self> {
        let h = representation::hamiltonian(rep, p)?;
        let projector = representation::physical_projector(rep, p)?;
        let eig = eig_decompose(&h)?;
        let scale = h.max_abs().max(1.0);
        let nulls = eig
            .values
            .iter()
            .filter(|l| l.norm() <= NULL_EIGENVALUE_TOLERANCE * scale)
            .count();
        let expected_nulls = h.dim() - rank_of_projector(&projector);
        if nulls != expected_nulls {
            return Err(Error::Singular);
        }
        let h_inv = eig.apply_fn(|l| {
            if l.norm() <= NULL_EIGENVALUE_TOLERANCE * scale {
                Complex64::new(0.0, 0.0)
            } else {
                1.0 / l
            }
        });
        let v_full = representation::velocity_component(rep, p, axis)?;
        let v0 = &(&projector * &v_full) * &projector;
        let drift = h_inv.scale_real(p.component(axis));
        let bracket = &v0 - &drift;
        Ok(Self {
            rep: *rep,
            momentum: *p,
            axis,
            eig,
            projector,
            v0,
            drift,
            bracket,
            h_inv,
        })
    }

    pub fn rep(&self) -> &RepSpec {
        &self.rep
    }

    pub fn momentum(&self) -> &Momentum {
        &self.momentum
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    /// `v(0)` on the physical subspace.
    pub fn initial_velocity(&self) -> &ComplexMatrix {
        &self.v0
    }

    /// `H⁻¹` on the physical subspace (zero on the photon's null space).
    pub fn h_inverse(&self) -> &ComplexMatrix {
        &self.h_inv
    }

    /// The constant part `p H⁻¹` of the velocity.
    pub fn drift(&self) -> &ComplexMatrix {
        &self.drift
    }

    pub fn projector(&self) -> &ComplexMatrix {
        &self.projector
    }

    pub fn eigen(&self) -> &EigenDecomposition {
        &self.eig
    }

    /// `e^{−2iHt}`.
    pub fn oscillator(&self, t: f64) -> ComplexMatrix {
        self.eig.apply_fn(|l| (I * (-2.0 * t) * l).exp())
    }

    pub fn velocity(&self, t: f64) -> ComplexMatrix {
        if t == 0.0 {
            return self.v0.clone();
        }
        &(&self.bracket * &self.oscillator(t)) + &self.drift
    }

    pub fn displacement(&self, t: f64) -> ComplexMatrix {
        if t == 0.0 {
            return ComplexMatrix::zeros(self.v0.dim());
        }
        let id = ComplexMatrix::identity(self.v0.dim());
        let osc = &self.oscillator(t) - &id;
        &self.drift.scale_real(t) + &(&self.amplitude() * &osc)
    }

    /// `(v₀ − p H⁻¹)(i/2) H⁻¹`.
    pub fn amplitude(&self) -> ComplexMatrix {
        &self.bracket * &self.h_inv.scale(I * 0.5)
    }
}

fn rank_of_projector(p: &ComplexMatrix) -> usize {
    p.trace().re.round() as usize
}

/// Brute-force Heisenberg evolution `e^{iHt} v₀ e^{−iHt}`.
#[derive(Debug, Clone)]
pub struct HeisenbergOracle {
    propagator: ExpPropagator,
    v0: ComplexMatrix,
    projector: ComplexMatrix,
}

impl HeisenbergOracle {
    pub fn new(rep: &RepSpec, p: &Momentum, axis: Axis) -> Result<Self> {
        let h = representation::hamiltonian(rep, p)?;
        Ok(Self {
            propagator: ExpPropagator::new(&h)?,
            v0: representation::velocity_component(rep, p, axis)?,
            projector: representation::physical_projector(rep, p)?,
        })
    }

    pub fn velocity(&self, t: f64) -> Result<ComplexMatrix> {
        let fwd = self.propagator.exp(I * t)?;
        let back = self.propagator.exp(I * -t)?;
        Ok(&(&fwd * &self.v0) * &back)
    }

    /// Velocity compressed to the physical subspace.
    pub fn velocity_physical(&self, t: f64) -> Result<ComplexMatrix> {
        Ok(&(&self.projector * &self.velocity(t)?) * &self.projector)
    }

    /// `∫ₐᵇ P v(s) P ds` by adaptive Simpson with absolute tolerance `tol`.
    pub fn integrate_velocity(&self, a: f64, b: f64, tol: f64) -> Result<ComplexMatrix> {
        adaptive_simpson(|s| self.velocity_physical(s), a, b, tol)
    }
}

pub fn evolve_velocity_closed(rep: &RepSpec, p: &Momentum, axis: Axis, t: f64) -> Result<ComplexMatrix> {
    Ok(ClosedForm::new(rep, p, axis)?.velocity(t))
}

pub fn evolve_velocity_numeric(rep: &RepSpec, p: &Momentum, axis: Axis, t: f64) -> Result<ComplexMatrix> {
    HeisenbergOracle::new(rep, p, axis)?.velocity(t)
}

pub fn evolve_displacement_closed(
    rep: &RepSpec,
    p: &Momentum,
    axis: Axis,
    t: f64,
) -> Result<ComplexMatrix> {
    Ok(ClosedForm::new(rep, p, axis)?.displacement(t))
}

/// `∫₀ᵗ v_numeric(s) ds` (physical subspace), adaptive Simpson.
pub fn displacement_by_quadrature(
    rep: &RepSpec,
    p: &Momentum,
    axis: Axis,
    t: f64,
    tol: f64,
) -> Result<ComplexMatrix> {
    HeisenbergOracle::new(rep, p, axis)?.integrate_velocity(0.0, t, tol)
}

/// Angular frequency `2√(m² + 𝔭²)` of the trembling motion.
pub fn zitter_frequency(rep: &RepSpec, p: &Momentum) -> Result<f64> {
    rep.check_momentum(p)?;
    Ok(2.0 * energy(rep.mass(), p))
}

pub fn zitter_amplitude(rep: &RepSpec, p: &Momentum, axis: Axis) -> Result<ComplexMatrix> {
    Ok(ClosedForm::new(rep, p, axis)?.amplitude())
}

/// Branch block `P_a v(t) P_b` of the closed-form velocity.
pub fn branch_block(
    rep: &RepSpec,
    p: &Momentum,
    axis: Axis,
    t: f64,
    a: Branch,
    b: Branch,
) -> Result<ComplexMatrix> {
    let proj = representation::branch_projectors(rep, p)?;
    let v = evolve_velocity_closed(rep, p, axis, t)?;
    Ok(&(proj.get(a) * &v) * proj.get(b))
}

/// `n` uniform samples over four trembling periods, `[0, 8π/ω]`.
pub fn default_time_grid(omega: f64, n: usize) -> Result<Vec<f64>> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::InvalidArgument("frequency must be positive".into()));
    }
    linspace(0.0, 8.0 * std::f64::consts::PI / omega, n)
}

/// `n ≥ 2` evenly spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::InvalidArgument("a time grid needs at least 2 samples".into()));
    }
    let step = (b - a) / (n - 1) as f64;
    Ok((0..n).map(|k| if k == n - 1 { b } else { a + step * k as f64 }).collect())
}

/// Checks that `times` starts at 0 and increases strictly.
pub fn validate_times(times: &[f64]) -> Result<()> {
    match times.first() {
        None => return Err(Error::InvalidArgument("empty time grid".into())),
        Some(&t0) if t0 != 0.0 => {
            return Err(Error::InvalidArgument("time grid must start at 0".into()))
        }
        _ => {}
    }
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::NonFinite);
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("times must increase strictly".into()));
    }
    Ok(())
}

/// Sampled `v(t)` and `Δr(t)` along one axis.
#[derive(Debug, Clone)]
pub struct OperatorTrajectory {
    pub rep: RepSpec,
    pub momentum: Momentum,
    pub axis: Axis,
    pub times: Vec<f64>,
    pub v_samples: Vec<ComplexMatrix>,
    pub dr_samples: Vec<ComplexMatrix>,
}

pub fn operator_trajectory(
    rep: &RepSpec,
    p: &Momentum,
    axis: Axis,
    times: &[f64],
) -> Result<OperatorTrajectory> {
    validate_times(times)?;
    let cf = ClosedForm::new(rep, p, axis)?;
    Ok(OperatorTrajectory {
        rep: *rep,
        momentum: *p,
        axis,
        times: times.to_vec(),
        v_samples: times.iter().map(|&t| cf.velocity(t)).collect(),
        dr_samples: times.iter().map(|&t| cf.displacement(t)).collect(),
    })
}

const MAX_SIMPSON_DEPTH: usize = 50;

/// Adaptive Simpson quadrature of a matrix-valued function, error measured
/// in the max-entry norm. The tolerance is shared out in proportion to
/// interval length.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, tol: f64) -> Result<ComplexMatrix>
where
    F: Fn(f64) -> Result<ComplexMatrix>,
{
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    if a == b {
        let dim = f(a)?.dim();
        return Ok(ComplexMatrix::zeros(dim));
    }
    let fa = f(a)?;
    let fb = f(b)?;
    let m = 0.5 * (a + b);
    let fm = f(m)?;
    let whole = simpson(a, b, &fa, &fm, &fb);
    let density = tol / (b - a).abs();
    simpson_step(&f, a, b, fa, fm, fb, whole, density, 0)
}

fn simpson(a: f64, b: f64, fa: &ComplexMatrix, fm: &ComplexMatrix, fb: &ComplexMatrix) -> ComplexMatrix {
    (&(fa + &fm.scale_real(4.0)) + fb).scale_real((b - a) / 6.0)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: ComplexMatrix,
    fm: ComplexMatrix,
    fb: ComplexMatrix,
    whole: ComplexMatrix,
    density: f64,
    depth: usize,
) -> Result<ComplexMatrix>
where
    F: Fn(f64) -> Result<ComplexMatrix>,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = simpson(a, m, &fa, &flm, &fm);
    let right = simpson(m, b, &fm, &frm, &fb);
    let both = &left + &right;
    let delta = &both - &whole;
    if delta.max_abs() <= 15.0 * density * (b - a).abs() {
        return Ok(&both + &delta.scale_real(1.0 / 15.0));
    }
    if depth >= MAX_SIMPSON_DEPTH {
        return Err(Error::NonConvergence { iterations: depth });
    }
    let l = simpson_step(f, a, m, fa, flm, fm.clone(), left, density, depth + 1)?;
    let r = simpson_step(f, m, b, fm, frm, fb, right, density, depth + 1)?;
    Ok(&l + &r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::{self, SpinRep};

    fn pz(z: f64) -> Momentum {
        Momentum::new(0.0, 0.0, z).unwrap()
    }

    #[test]
    fn t_zero_is_exact() {
        let rep = RepSpec::dirac(1.0).unwrap();
        let p = Momentum::new(0.3, 0.1, 0.7).unwrap();
        let cf = ClosedForm::new(&rep, &p, Axis::X).unwrap();
        assert_eq!(cf.velocity(0.0), spin::dirac_matrices().alpha[0]);
        assert_eq!(cf.displacement(0.0).max_abs(), 0.0);
    }

    #[test]
    fn massless_dirac_at_quarter_period() {
        // H = α₃, e^{−2iHt} = cos 2t − i α₃ sin 2t; at t = π/2 that is −1,
        // so v₃ = −(α₃ − α₃) + α₃ = α₃ and v₁ = −α₁.
        let rep = RepSpec::dirac(0.0).unwrap();
        let d = spin::dirac_matrices();
        let t = std::f64::consts::FRAC_PI_2;
        let v3 = evolve_velocity_closed(&rep, &pz(1.0), Axis::Z, t).unwrap();
        assert!(v3.approx_eq(&d.alpha[2], 1e-14));
        let v1 = evolve_velocity_closed(&rep, &pz(1.0), Axis::X, t).unwrap();
        assert!(v1.approx_eq(&d.alpha[0].scale_real(-1.0), 1e-14));
        let num = evolve_velocity_numeric(&rep, &pz(1.0), Axis::X, t).unwrap();
        assert!(num.approx_eq(&v1, 1e-14));
    }

    #[test]
    fn fw_velocity_is_constant() {
        let rep = RepSpec::foldy_wouthuysen(1.0, SpinRep::HALF).unwrap();
        let p = Momentum::new(0.0, 3.0, 4.0).unwrap();
        let v0 = representation::velocity_component(&rep, &p, Axis::Z).unwrap();
        for t in [0.3, 1.7, 12.0] {
            let v = evolve_velocity_closed(&rep, &p, Axis::Z, t).unwrap();
            assert!(v.approx_eq(&v0, 1e-15));
        }
        assert!(zitter_amplitude(&rep, &p, Axis::Z).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn frequency_examples() {
        let rep = RepSpec::dirac(0.0).unwrap();
        assert_eq!(zitter_frequency(&rep, &pz(1.0)).unwrap(), 2.0);
        let rep = RepSpec::dirac(3.0).unwrap();
        assert_eq!(zitter_frequency(&rep, &pz(4.0)).unwrap(), 10.0);
        assert!(zitter_frequency(&RepSpec::dirac(0.0).unwrap(), &Momentum::ZERO).is_err());
    }

    #[test]
    fn transverse_amplitude_massless_dirac() {
        let rep = RepSpec::dirac(0.0).unwrap();
        let amp = zitter_amplitude(&rep, &pz(1.0), Axis::X).unwrap();
        assert!((amp.max_abs() - 0.5).abs() < 1e-14);
        let amp2 = zitter_amplitude(&rep, &pz(2.0), Axis::X).unwrap();
        assert!((amp2.max_abs() - 0.25).abs() < 1e-14);
    }

    #[test]
    fn quadrature_matches_closed_displacement() {
        let rep = RepSpec::dirac(1.0).unwrap();
        let p = pz(1.0);
        for axis in Axis::ALL {
            let q = displacement_by_quadrature(&rep, &p, axis, 3.0, QUADRATURE_TOLERANCE).unwrap();
            let c = evolve_displacement_closed(&rep, &p, axis, 3.0).unwrap();
            assert!(q.dist_max(&c) < 1e-9, "axis {axis:?}: {}", q.dist_max(&c));
        }
    }

    #[test]
    fn photon_closed_form_on_transverse_subspace() {
        let rep = RepSpec::photon();
        let p = Momentum::new(0.6, 0.0, 0.8).unwrap();
        let cf = ClosedForm::new(&rep, &p, Axis::X).unwrap();
        let oracle = HeisenbergOracle::new(&rep, &p, Axis::X).unwrap();
        for t in [0.4, 2.5, 9.0] {
            let diff = cf.velocity(t).dist_max(&oracle.velocity_physical(t).unwrap());
            assert!(diff < 1e-12, "{diff}");
        }
    }

    #[test]
    fn time_grid_validation() {
        assert!(validate_times(&[0.0, 1.0, 2.0]).is_ok());
        assert!(validate_times(&[0.5, 1.0]).is_err());
        assert!(validate_times(&[0.0, 1.0, 1.0]).is_err());
        assert!(validate_times(&[]).is_err());
        let g = default_time_grid(2.0, 512).unwrap();
        assert_eq!(g.len(), 512);
        assert_eq!(g[0], 0.0);
        assert_eq!(*g.last().unwrap(), 4.0 * std::f64::consts::PI);
    }

    #[test]
    fn trajectory_invariants() {
        let rep = RepSpec::gfv(0.5, SpinRep::ONE, Some(0.7)).unwrap();
        let p = Momentum::new(0.1, 0.2, 0.9).unwrap();
        let times = linspace(0.0, 3.0, 7).unwrap();
        let traj = operator_trajectory(&rep, &p, Axis::Y, &times).unwrap();
        let v0 = representation::velocity_component(&rep, &p, Axis::Y).unwrap();
        assert_eq!(traj.v_samples[0], v0);
        assert_eq!(traj.dr_samples[0].max_abs(), 0.0);
    }

    #[test]
    fn simpson_polynomial_exact() {
        let f = |s: f64| Ok(ComplexMatrix::identity(1).scale_real(s * s * s));
        let r = adaptive_simpson(f, 0.0, 2.0, 1e-12).unwrap();
        assert!((r[(0, 0)].re - 4.0).abs() < 1e-14);
    }
}
