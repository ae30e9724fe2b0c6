//! Gaussian momentum-space wave packets and their expectation values.
//!
//! The free dynamics is diagonal in momentum, so a packet is a weighted
//! list of plane-wave spinors and every expectation value is a weighted
//! sum over samples with no cross terms between momenta. Expectations use
//! the metric Rayleigh quotient `Σ w Ψ†gOΨ / Σ w Ψ†gΨ`; for FV and GFV the
//! denominator is the signed ρ₃-norm.

use num_complex::Complex64;

use crate::dynamics::ClosedForm;
use crate::error::{Error, Result};
use crate::momentum::{Axis, Branch, Momentum};
use crate::operator::{fix_phase, ComplexMatrix, Metric, I};
use crate::representation::{self, RepKind, RepSpec};
use crate::signal::{self, LinearFit, SpectralPeak};
use crate::transform;

/// Grids reach this many widths away from the center.
pub const GRID_HALF_WIDTH: f64 = 4.0;

/// Signed norms smaller than this are rejected as indefinite.
pub const MIN_SIGNED_NORM: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GridGeometry {
    /// Samples along the line through the center in the center's direction.
    #[default]
    Line,
    /// Tensor-product grid, `n³` samples.
    Cube,
}

/// Weighted momentum samples; weights are non-negative and sum to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumGrid {
    samples: Vec<(Momentum, f64)>,
}

impl MomentumGrid {
    /// Normalizes the weights.
    pub fn from_samples(samples: Vec<(Momentum, f64)>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidArgument("empty momentum grid".into()));
        }
        if samples.iter().any(|(_, w)| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidArgument("weights must be finite and non-negative".into()));
        }
        let total: f64 = samples.iter().map(|(_, w)| w).sum();
        if total <= 0.0 {
            return Err(Error::InvalidArgument("weights sum to zero".into()));
        }
        Ok(Self {
            samples: samples.into_iter().map(|(p, w)| (p, w / total)).collect(),
        })
    }

    /// Gaussian weights `exp(−x²/2σ²)` at `n` points per direction spread
    /// uniformly over `[−4σ, 4σ]`; `n = 1` is the center alone.
    pub fn gaussian(center: Momentum, sigma: f64, n: usize, geometry: GridGeometry) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidArgument(format!("sigma must be positive, got {sigma}")));
        }
        if n == 0 {
            return Err(Error::InvalidArgument("n_samples must be at least 1".into()));
        }
        let offsets: Vec<f64> = if n == 1 {
            vec![0.0]
        } else {
            let span = GRID_HALF_WIDTH * sigma;
            (0..n)
                .map(|k| -span + 2.0 * span * k as f64 / (n - 1) as f64)
                .collect()
        };
        let gauss = |x: f64| (-0.5 * (x / sigma).powi(2)).exp();
        let samples = match geometry {
            GridGeometry::Line => {
                let dir = center.direction().unwrap_or(Axis::Z.unit());
                offsets.iter().map(|&x| (center.shifted(dir, x), gauss(x))).collect()
            }
            GridGeometry::Cube => {
                let mut out = Vec::with_capacity(n * n * n);
                for &x in &offsets {
                    for &y in &offsets {
                        for &z in &offsets {
                            let p = Momentum([center.0[0] + x, center.0[1] + y, center.0[2] + z]);
                            out.push((p, gauss(x) * gauss(y) * gauss(z)));
                        }
                    }
                }
                out
            }
        };
        Self::from_samples(samples)
    }

    pub fn samples(&self) -> &[(Momentum, f64)] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn weight_sum(&self) -> f64 {
        self.samples.iter().map(|(_, w)| w).sum()
    }
}

/// Coefficients `(λ₊, λ₋)` of the branch spinors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchMix {
    pub positive: Complex64,
    pub negative: Complex64,
}

impl BranchMix {
    pub fn new(positive: Complex64, negative: Complex64) -> Result<Self> {
        if positive.norm() == 0.0 && negative.norm() == 0.0 {
            return Err(Error::InvalidArgument("branch mix is zero".into()));
        }
        if !(positive.is_finite() && negative.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { positive, negative })
    }

    pub fn real(positive: f64, negative: f64) -> Result<Self> {
        Self::new(Complex64::new(positive, 0.0), Complex64::new(negative, 0.0))
    }

    pub fn pure(branch: Branch) -> Self {
        let (one, zero) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        match branch {
            Branch::Positive => Self { positive: one, negative: zero },
            Branch::Negative => Self { positive: zero, negative: one },
        }
    }

    pub fn equal() -> Self {
        let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self { positive: s, negative: s }
    }

    pub fn is_mixed(&self) -> bool {
        self.positive.norm() > 0.0 && self.negative.norm() > 0.0
    }
}

/// Smallest `|center|` for which a massless packet's grid avoids 𝔭 = 0.
pub fn massless_support_radius(sigma: f64, geometry: GridGeometry) -> f64 {
    match geometry {
        GridGeometry::Line => GRID_HALF_WIDTH * sigma,
        GridGeometry::Cube => GRID_HALF_WIDTH * sigma * 3f64.sqrt(),
    }
}

/// Metric-normalized branch eigenvector `P_branch ξ`, phase-fixed.
///
/// `ξ` defaults to the all-ones vector; if its projection is too small the
/// column of the projector with the largest norm is used instead.
pub fn branch_spinor(
    rep: &RepSpec,
    p: &Momentum,
    branch: Branch,
    reference: Option<&[Complex64]>,
) -> Result<Vec<Complex64>> {
    let dim = rep.dim();
    let ones = vec![Complex64::new(1.0, 0.0); dim];
    let xi = reference.unwrap_or(&ones);
    if xi.len() != dim {
        return Err(Error::DimensionMismatch { left: dim, right: xi.len() });
    }
    let proj = representation::branch_projectors(rep, p)?;
    let proj = proj.get(branch);
    let mut u = proj.mul_vec(xi);
    if transform::vec_norm(&u) < 1e-3 * transform::vec_norm(xi) {
        u = (0..dim)
            .map(|j| proj.column(j))
            .max_by(|a, b| transform::vec_norm(a).total_cmp(&transform::vec_norm(b)))
            .expect("dim > 0");
    }
    fix_phase(&mut u);
    let g = representation::metric(rep);
    let n = g.inner(&u, &u).re;
    if n.abs() < MIN_SIGNED_NORM * transform::vec_norm(&u).powi(2) {
        return Err(Error::IndefiniteNorm(n));
    }
    let scale = 1.0 / n.abs().sqrt();
    Ok(u.into_iter().map(|z| z * scale).collect())
}

/// A packet of plane-wave spinors over a momentum grid.
#[derive(Debug, Clone)]
pub struct PacketState {
    rep: RepSpec,
    grid: MomentumGrid,
    mix: BranchMix,
    amplitudes: Vec<Vec<Complex64>>,
    metric: Metric,
    signed_norm: f64,
    raw_signed_norm: f64,
}

impl PacketState {
    pub fn rep(&self) -> &RepSpec {
        &self.rep
    }

    pub fn grid(&self) -> &MomentumGrid {
        &self.grid
    }

    pub fn mix(&self) -> &BranchMix {
        &self.mix
    }

    pub fn amplitudes(&self) -> &[Vec<Complex64>] {
        &self.amplitudes
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    /// `Σ w Ψ†gΨ` of the stored (normalized) amplitudes: `+1` or `−1`.
    pub fn signed_norm(&self) -> f64 {
        self.signed_norm
    }

    /// Signed norm before normalization.
    pub fn raw_signed_norm(&self) -> f64 {
        self.raw_signed_norm
    }

    /// Builds a packet from explicit per-sample spinors, normalizing the
    /// signed norm to ±1.
    pub fn from_amplitudes(
        rep: &RepSpec,
        grid: MomentumGrid,
        mix: BranchMix,
        amplitudes: Vec<Vec<Complex64>>,
    ) -> Result<Self> {
        if amplitudes.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                left: grid.len(),
                right: amplitudes.len(),
            });
        }
        for (psi, (p, _)) in amplitudes.iter().zip(grid.samples()) {
            rep.check_momentum(p)?;
            if psi.len() != rep.dim() {
                return Err(Error::DimensionMismatch {
                    left: rep.dim(),
                    right: psi.len(),
                });
            }
        }
        let metric = representation::metric(rep);
        let raw: f64 = amplitudes
            .iter()
            .zip(grid.samples())
            .map(|(psi, (_, w))| w * metric.inner(psi, psi).re)
            .sum();
        if raw.abs() < MIN_SIGNED_NORM {
            return Err(Error::IndefiniteNorm(raw));
        }
        let scale = 1.0 / raw.abs().sqrt();
        let amplitudes = amplitudes
            .into_iter()
            .map(|psi| psi.into_iter().map(|z| z * scale).collect())
            .collect();
        Ok(Self {
            rep: *rep,
            grid,
            mix,
            amplitudes,
            metric,
            signed_norm: raw.signum(),
            raw_signed_norm: raw,
        })
    }

    /// Largest relative longitudinal component `‖p̂·φ‖, ‖p̂·χ‖` over the
    /// samples of a photon packet; 0 for other representations.
    pub fn transversality_residual(&self) -> Result<f64> {
        if self.rep.kind() != RepKind::DiracLikePhoton {
            return Ok(0.0);
        }
        let mut worst: f64 = 0.0;
        for (psi, (p, _)) in self.amplitudes.iter().zip(self.grid.samples()) {
            let d = p.direction()?;
            let scale = transform::vec_norm(psi).max(f64::MIN_POSITIVE);
            for block in [&psi[0..3], &psi[3..6]] {
                let dot: Complex64 = block.iter().zip(d).map(|(z, di)| z * di).sum();
                worst = worst.max(dot.norm() / scale);
            }
        }
        Ok(worst)
    }
}

/// Gaussian packet on a line grid with the default reference spinor.
pub fn make_gaussian_packet(
    rep: &RepSpec,
    center: Momentum,
    sigma: f64,
    mix: BranchMix,
    n_samples: usize,
) -> Result<PacketState> {
    make_packet(rep, center, sigma, mix, n_samples, GridGeometry::Line, None)
}

/// Gaussian packet with explicit grid geometry and reference spinor.
pub fn make_packet(
    rep: &RepSpec,
    center: Momentum,
    sigma: f64,
    mix: BranchMix,
    n_samples: usize,
    geometry: GridGeometry,
    reference: Option<&[Complex64]>,
) -> Result<PacketState> {
    if rep.is_massless() {
        let radius = massless_support_radius(sigma, geometry);
        if !(center.norm() > radius) {
            return Err(Error::InvalidArgument(format!(
                "massless packet support reaches zero momentum: |center| = {} must exceed {}",
                center.norm(),
                radius
            )));
        }
    }
    let grid = MomentumGrid::gaussian(center, sigma, n_samples, geometry)?;
    let mut amplitudes = Vec::with_capacity(grid.len());
    for (p, _) in grid.samples() {
        let mut psi = vec![Complex64::new(0.0, 0.0); rep.dim()];
        for (branch, lambda) in [(Branch::Positive, mix.positive), (Branch::Negative, mix.negative)] {
            if lambda.norm() == 0.0 {
                continue;
            }
            let u = branch_spinor(rep, p, branch, reference)?;
            for (a, b) in psi.iter_mut().zip(&u) {
                *a += lambda * b;
            }
        }
        amplitudes.push(psi);
    }
    PacketState::from_amplitudes(rep, grid, mix, amplitudes)
}

/// Metric Rayleigh quotient of a per-momentum operator family.
pub fn expectation<F>(state: &PacketState, op: F) -> Result<Complex64>
where
    F: Fn(&Momentum) -> Result<ComplexMatrix>,
{
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = 0.0;
    for (psi, (p, w)) in state.amplitudes.iter().zip(state.grid.samples()) {
        let o = op(p)?;
        if o.dim() != psi.len() {
            return Err(Error::DimensionMismatch {
                left: psi.len(),
                right: o.dim(),
            });
        }
        num += state.metric.inner(psi, &o.mul_vec(psi)) * *w;
        den += w * state.metric.inner(psi, psi).re;
    }
    if den.abs() < MIN_SIGNED_NORM {
        return Err(Error::IndefiniteNorm(den));
    }
    Ok(num / den)
}

/// `⟨v⟩(t)`, `⟨Δr⟩(t)` and the signed norm of the Schrödinger-evolved
/// state on a time grid.
#[derive(Debug, Clone)]
pub struct PacketTrajectory {
    pub axis: Axis,
    pub times: Vec<f64>,
    pub velocity: Vec<Complex64>,
    pub displacement: Vec<Complex64>,
    pub signed_norm: Vec<f64>,
}

impl PacketTrajectory {
    pub fn velocity_re(&self) -> Vec<f64> {
        self.velocity.iter().map(|z| z.re).collect()
    }

    pub fn displacement_re(&self) -> Vec<f64> {
        self.displacement.iter().map(|z| z.re).collect()
    }

    /// Half the peak-to-peak excursion of `Re⟨v⟩`.
    pub fn oscillation_amplitude(&self) -> f64 {
        signal::half_range(&self.velocity_re())
    }

    /// FFT peak of `Re⟨v⟩`; assumes a uniform grid.
    pub fn dominant_frequency(&self) -> Result<SpectralPeak> {
        if self.times.len() < 2 {
            return Err(Error::InvalidArgument("trajectory too short".into()));
        }
        signal::dominant_frequency(&self.velocity_re(), self.times[1] - self.times[0])
    }

    /// Straight-line fit of `Re⟨Δr⟩(t)`; the slope is the drift velocity.
    pub fn drift_fit(&self) -> Result<LinearFit> {
        signal::linear_fit(&self.times, &self.displacement_re())
    }

    /// Largest deviation of the signed norm from its initial value.
    pub fn norm_drift(&self) -> f64 {
        let n0 = self.signed_norm.first().copied().unwrap_or(0.0);
        self.signed_norm.iter().map(|n| (n - n0).abs()).fold(0.0, f64::max)
    }
}

/// Closed-form dynamics of one sample projected onto its eigenmodes:
/// `Ψ†g v(t) Ψ = drift + Σ_j c_j e^{−2iλ_j t}` and similarly for `Δr`.
struct SampleModes {
    weight: f64,
    values: Vec<Complex64>,
    vectors: ComplexMatrix,
    coords: Vec<Complex64>,
    initial: Complex64,
    drift: Complex64,
    velocity: Vec<Complex64>,
    displacement: Vec<Complex64>,
}

impl SampleModes {
    fn new(cf: &ClosedForm, psi: &[Complex64], g: &Metric, weight: f64) -> Self {
        let eig = cf.eigen();
        let coords = eig.inverse.mul_vec(psi);
        // row vector Ψ†g M V, paired with V⁻¹Ψ
        let modes = |m: &ComplexMatrix| -> Vec<Complex64> {
            let gpsi: Vec<Complex64> = psi
                .iter()
                .zip(g.signs())
                .map(|(z, &s)| z.conj() * f64::from(s))
                .collect();
            let mv = m * &eig.vectors;
            (0..psi.len())
                .map(|j| {
                    let row: Complex64 = (0..psi.len()).map(|i| gpsi[i] * mv[(i, j)]).sum();
                    row * coords[j]
                })
                .collect()
        };
        let bracket = cf.initial_velocity() - cf.drift();
        Self {
            weight,
            values: eig.values.clone(),
            vectors: eig.vectors.clone(),
            initial: g.inner(psi, &cf.initial_velocity().mul_vec(psi)),
            drift: g.inner(psi, &cf.drift().mul_vec(psi)),
            velocity: modes(&bracket),
            displacement: modes(&cf.amplitude()),
            coords,
        }
    }

    fn phases(&self, t: f64) -> impl Iterator<Item = Complex64> + '_ {
        self.values.iter().map(move |&l| (I * (-2.0 * t) * l).exp())
    }

    fn velocity(&self, t: f64) -> Complex64 {
        if t == 0.0 {
            return self.initial;
        }
        self.drift + self.phases(t).zip(&self.velocity).map(|(e, c)| e * c).sum::<Complex64>()
    }

    fn displacement(&self, t: f64) -> Complex64 {
        if t == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let osc: Complex64 = self
            .phases(t)
            .zip(&self.displacement)
            .map(|(e, d)| (e - 1.0) * d)
            .sum();
        self.drift * t + osc
    }

    fn evolved(&self, t: f64) -> Vec<Complex64> {
        let y: Vec<Complex64> = self
            .values
            .iter()
            .zip(&self.coords)
            .map(|(&l, c)| (I * -t * l).exp() * c)
            .collect();
        self.vectors.mul_vec(&y)
    }
}

struct PacketEvolution<'a> {
    state: &'a PacketState,
    samples: Vec<SampleModes>,
    denominator: f64,
}

impl<'a> PacketEvolution<'a> {
    fn new(state: &'a PacketState, axis: Axis) -> Result<Self> {
        let samples = state
            .grid
            .samples()
            .iter()
            .zip(&state.amplitudes)
            .map(|((p, w), psi)| {
                let cf = ClosedForm::new(&state.rep, p, axis)?;
                Ok(SampleModes::new(&cf, psi, &state.metric, *w))
            })
            .collect::<Result<Vec<_>>>()?;
        let denominator: f64 = state
            .amplitudes
            .iter()
            .zip(state.grid.samples())
            .map(|(psi, (_, w))| w * state.metric.inner(psi, psi).re)
            .sum();
        if denominator.abs() < MIN_SIGNED_NORM {
            return Err(Error::IndefiniteNorm(denominator));
        }
        Ok(Self {
            state,
            samples,
            denominator,
        })
    }

    fn velocity(&self, t: f64) -> Complex64 {
        let num: Complex64 = self.samples.iter().map(|s| s.velocity(t) * s.weight).sum();
        num / self.denominator
    }

    fn displacement(&self, t: f64) -> Complex64 {
        let num: Complex64 = self.samples.iter().map(|s| s.displacement(t) * s.weight).sum();
        num / self.denominator
    }

    fn evolved_norm(&self, t: f64) -> f64 {
        let g = &self.state.metric;
        self.samples
            .iter()
            .map(|s| {
                let psi_t = s.evolved(t);
                s.weight * g.inner(&psi_t, &psi_t).re
            })
            .sum()
    }
}

pub fn packet_trajectory(state: &PacketState, axis: Axis, times: &[f64]) -> Result<PacketTrajectory> {
    crate::dynamics::validate_times(times)?;
    let evo = PacketEvolution::new(state, axis)?;
    Ok(PacketTrajectory {
        axis,
        times: times.to_vec(),
        velocity: times.iter().map(|&t| evo.velocity(t)).collect(),
        displacement: times.iter().map(|&t| evo.displacement(t)).collect(),
        signed_norm: times.iter().map(|&t| evo.evolved_norm(t)).collect(),
    })
}

/// `max_t |(⟨Δr⟩(t+h) − ⟨Δr⟩(t−h))/2h − ⟨v⟩(t)|`.
pub fn derivative_consistency(state: &PacketState, axis: Axis, times: &[f64], h: f64) -> Result<f64> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument("step must be positive".into()));
    }
    let evo = PacketEvolution::new(state, axis)?;
    Ok(times
        .iter()
        .map(|&t| {
            let d = (evo.displacement(t + h) - evo.displacement(t - h)) / (2.0 * h);
            (d - evo.velocity(t)).norm()
        })
        .fold(0.0, f64::max))
}

/// Central-difference check of `v_i = ∂H/∂p_i`; returns the largest
/// entry-wise residual over the three axes.
///
/// A GFV representation with the momentum-dependent default N is frozen at
/// `p` first, so that N does not vary with the step.
pub fn group_velocity_check(rep: &RepSpec, p: &Momentum, h: f64) -> Result<f64> {
    if !(h.is_finite() && h > 1e-12 * p.norm().max(1.0)) {
        return Err(Error::InvalidArgument(format!("step underflow: h = {h}")));
    }
    let rep = rep.resolved_at(p);
    let v = representation::velocity_operator(&rep, p)?;
    let mut worst: f64 = 0.0;
    for axis in Axis::ALL {
        let e = axis.unit();
        let plus = representation::hamiltonian(&rep, &p.shifted(e, h))?;
        let minus = representation::hamiltonian(&rep, &p.shifted(e, -h))?;
        let diff = (&plus - &minus).scale_real(0.5 / h);
        worst = worst.max(diff.dist_max(&v[axis.offset()]));
    }
    Ok(worst)
}

/// Carries a packet into another representation through the FW
/// representation, `Ψ' = U_target⁻¹ U_source Ψ`, and renormalizes it.
pub fn map_packet(state: &PacketState, target: &RepSpec) -> Result<PacketState> {
    if target.dim() != state.rep.dim() {
        return Err(Error::DimensionMismatch {
            left: state.rep.dim(),
            right: target.dim(),
        });
    }
    let mut amplitudes = Vec::with_capacity(state.amplitudes.len());
    for (psi, (p, _)) in state.amplitudes.iter().zip(state.grid.samples()) {
        let to_fw = transform::transform_for(&state.rep, p)?;
        let from_fw = transform::transform_for(target, p)?;
        amplitudes.push(from_fw.inverse().mul_vec(&to_fw.matrix().mul_vec(psi)));
    }
    PacketState::from_amplitudes(target, state.grid.clone(), state.mix, amplitudes)
}
