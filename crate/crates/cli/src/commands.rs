//! The five study commands. Each builds a [`Document`] from a resolved
//! [`RunConfig`]; check failures are reported alongside the document.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zitterkit_core::dynamics::{self, ClosedForm, HeisenbergOracle};
use zitterkit_core::operator::{anticommutator, eigenvalues, Metric};
use zitterkit_core::representation::{self, photon_transversality_projector};
use zitterkit_core::spin::{self, check_spin_properties, dot};
use zitterkit_core::transform::{self, apply_similarity};
use zitterkit_core::wavepacket::{make_packet, packet_trajectory};
use zitterkit_core::{energy, Branch, ComplexMatrix, Momentum, RepKind, RepSpec, SpinRep};

use crate::config::RunConfig;
use crate::output::{Document, Value};
use crate::Failure;

/// Per-interval tolerance for the piecewise displacement quadrature.
pub const PIECEWISE_QUADRATURE_TOLERANCE: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    CheckAlgebra,
    Spectrum,
    EvolveOperator,
    EvolvePacket,
    Transform,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::CheckAlgebra => "check-algebra",
            Command::Spectrum => "spectrum",
            Command::EvolveOperator => "evolve-operator",
            Command::EvolvePacket => "evolve-packet",
            Command::Transform => "transform",
        }
    }
}

/// A finished document plus the names of any checks that failed.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub document: Document,
    pub failed: Vec<String>,
}

impl Outcome {
    fn clean(document: Document) -> Self {
        Outcome {
            document,
            failed: Vec::new(),
        }
    }
}

pub fn run(command: Command, cfg: &RunConfig) -> Result<Outcome, Failure> {
    match command {
        Command::CheckAlgebra => check_algebra(cfg),
        Command::Spectrum => spectrum(cfg).map(Outcome::clean),
        Command::EvolveOperator => evolve_operator(cfg).map(Outcome::clean),
        Command::EvolvePacket => evolve_packet(cfg).map(Outcome::clean),
        Command::Transform => transform(cfg),
    }
}

// ---------------------------------------------------------------- algebra

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

/// Reproducible momenta with components in `[-2, 2]` and `|p| ≥ 0.1`.
pub fn random_momenta(seed: u64, count: usize) -> Vec<Momentum> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p = Momentum([
            rng.random_range(-2.0..=2.0),
            rng.random_range(-2.0..=2.0),
            rng.random_range(-2.0..=2.0),
        ]);
        if p.norm() >= 0.1 {
            out.push(p);
        }
    }
    out
}

fn spin_label(s: SpinRep) -> String {
    if s.twice().is_multiple_of(2) {
        format!("{}", s.twice() / 2)
    } else {
        format!("{}/2", s.twice())
    }
}

fn casimir_residual(s: &[ComplexMatrix; 3], spin: SpinRep) -> f64 {
    let n = s[0].dim();
    let sq = s.iter().fold(ComplexMatrix::zeros(n), |acc, m| &acc + &(m * m));
    let j = spin.value();
    sq.dist_max(&ComplexMatrix::identity(n).scale_real(j * (j + 1.0)))
}

fn max_over<T>(items: &[T], f: impl Fn(&T) -> Result<f64, Failure>) -> Result<f64, Failure> {
    let mut worst: f64 = 0.0;
    for item in items {
        let r = f(item)?;
        // NaN must fail the check, so it wins over any finite value
        if r.is_nan() {
            return Ok(f64::NAN);
        }
        worst = worst.max(r);
    }
    Ok(worst)
}

/// Spin matrices, Clifford algebras, pseudo-Hermiticity, pseudounitarity
/// of the FW transforms and dispersion, each reduced to one residual.
pub fn algebra_suite(cfg: &RunConfig) -> Result<Vec<CheckResult>, Failure> {
    let tol = cfg.tolerance;
    let momenta = random_momenta(cfg.seed, cfg.random_momenta);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(1));
    let mut checks = Vec::new();
    let mut push = |name: String, residual: f64| {
        checks.push(CheckResult {
            name,
            residual: if residual.is_nan() { f64::INFINITY } else { residual },
            tolerance: tol,
        })
    };

    let mut s1 = spin::spin1_triple();
    if cfg.corrupt_spin {
        s1[0][(0, 1)] += Complex64::new(1e-3, 0.0);
    }
    let report = check_spin_properties(&s1, tol)?;
    push("spin1.commutation".into(), report.commutation);
    push("spin1.triple_product".into(), report.triple_product);
    push("spin1.casimir".into(), report.casimir);

    let mut spins = vec![SpinRep::ZERO, SpinRep::HALF, SpinRep::ONE, SpinRep::from_twice(3)];
    if !spins.contains(&cfg.rep.spin()) {
        spins.push(cfg.rep.spin());
    }
    for s in spins {
        let m = spin::spin_matrices(s);
        let label = spin_label(s);
        push(format!("ladder_spin{label}.commutation"), check_spin_properties(&m, tol)?.commutation);
        push(format!("ladder_spin{label}.casimir"), casimir_residual(&m, s));
    }

    let half = spin::spin_matrices(SpinRep::HALF);
    let dirac_s = spin::dirac_spin_triple();
    for (name, s) in [("pauli.helicity_square", &half), ("dirac.helicity_square", &dirac_s)] {
        let r = max_over(&momenta, |p| {
            let sp = dot(s, p.0);
            let n = sp.dim();
            let target = ComplexMatrix::identity(n).scale_real(p.norm_sqr() / 4.0);
            Ok((&sp * &sp).dist_max(&target) / p.norm_sqr().max(1.0))
        })?;
        push(name.into(), r);
    }

    push("dirac.clifford".into(), spin::dirac_clifford_residual(&spin::dirac_matrices()));

    let alpha = spin::photon_alpha_triple();
    let beta = spin::photon_beta();
    let mut photon_ab = (&beta * &beta).dist_max(&ComplexMatrix::identity(6));
    for a in &alpha {
        photon_ab = photon_ab.max(anticommutator(a, &beta)?.max_abs());
    }
    push("photon.alpha_beta".into(), photon_ab);
    let r = max_over(&momenta, |p| {
        let ap = dot(&alpha, p.0);
        let pt = photon_transversality_projector(p)?;
        let sq = &(&pt * &(&ap * &ap)) * &pt;
        Ok(sq.dist_max(&pt.scale_real(p.norm_sqr())) / p.norm_sqr().max(1.0))
    })?;
    push("photon.transverse_square".into(), r);

    let masses = [0.0, 0.5, 1.0, 2.0];
    let gfv_spins = [SpinRep::ZERO, SpinRep::HALF, SpinRep::ONE];
    let mut gfv_cases = Vec::with_capacity(momenta.len());
    for (k, p) in momenta.iter().enumerate() {
        let magnitude: f64 = rng.random_range(0.5..=5.0);
        let n = if rng.random_bool(0.5) { magnitude } else { -magnitude };
        let rep = RepSpec::gfv(masses[k % 4], gfv_spins[k % 3], Some(n))?;
        gfv_cases.push((rep, *p, magnitude));
    }
    let r = max_over(&gfv_cases, |(rep, p, _)| {
        let h = representation::hamiltonian(rep, p)?;
        let g = representation::metric(rep);
        Ok(g.sandwich(&h.adjoint()).dist_max(&h) / h.max_abs().max(1.0))
    })?;
    push("gfv.pseudo_hermiticity".into(), r);

    let r = max_over(&gfv_cases, |(rep, p, n)| {
        let rep = RepSpec::gfv(rep.mass(), rep.spin(), Some(*n))?;
        Ok(transform::transform_for(&rep, p)?.pseudounitarity_residual())
    })?;
    push("gfv_fw.pseudounitarity".into(), r);
    let r = max_over(&momenta, |p| Ok(transform::fw_massless_dirac(p)?.pseudounitarity_residual()))?;
    push("dirac_fw.unitarity".into(), r);
    let r = max_over(&momenta, |p| Ok(transform::fw_photon(p)?.pseudounitarity_residual()))?;
    push("photon_fw.unitarity".into(), r);

    let m = cfg.rep.mass();
    let family_spin = match cfg.rep.kind() {
        RepKind::GeneralizedFv | RepKind::FoldyWouthuysen => cfg.rep.spin(),
        _ => SpinRep::HALF,
    };
    let mut reps: Vec<(String, RepSpec)> = vec![
        ("dirac".into(), RepSpec::dirac(m)?),
        ("gfv".into(), RepSpec::gfv(m, family_spin, None)?),
        ("photon".into(), RepSpec::photon()),
        ("fw".into(), RepSpec::foldy_wouthuysen(m, family_spin)?),
    ];
    if m > 0.0 {
        reps.insert(1, ("fv".into(), RepSpec::feshbach_villars(m)?));
    }
    reps.push(("configured".into(), cfg.rep));
    for (name, rep) in &reps {
        let r = max_over(&momenta, |p| {
            Ok(representation::dispersion_residual(rep, p)? / energy(rep.mass(), p).max(1.0))
        })?;
        push(format!("dispersion.{name}"), r);
    }

    Ok(checks)
}

fn check_algebra(cfg: &RunConfig) -> Result<Outcome, Failure> {
    let checks = algebra_suite(cfg)?;
    let mut doc = Document::new(Command::CheckAlgebra.name(), cfg, &["check", "residual", "tolerance", "status"]);
    let mut failed = Vec::new();
    let mut worst: f64 = 0.0;
    for c in &checks {
        worst = worst.max(c.residual);
        if !c.passed() {
            failed.push(c.name.clone());
        }
        doc.push_row(vec![
            c.name.as_str().into(),
            c.residual.into(),
            c.tolerance.into(),
            if c.passed() { "pass" } else { "FAIL" }.into(),
        ]);
    }
    doc.add_summary("checks", checks.len());
    doc.add_summary("failed", failed.len());
    doc.add_summary("max_residual", worst);
    Ok(Outcome { document: doc, failed })
}

// --------------------------------------------------------------- spectrum

fn sweep_direction(p: &Momentum) -> [f64; 3] {
    p.direction().unwrap_or([0.0, 0.0, 1.0])
}

fn spectrum(cfg: &RunConfig) -> Result<Document, Failure> {
    let rep = &cfg.rep;
    let dim = rep.dim();
    let dir = sweep_direction(&cfg.center);
    let p_end = if cfg.center.is_zero() { 1.0 } else { cfg.center.norm() };
    // massless Hamiltonians vanish at p = 0, so their sweep starts one step in
    let p_start = if rep.is_massless() { p_end / cfg.steps as f64 } else { 0.0 };
    let grid = dynamics::linspace(p_start, p_end, cfg.steps)?;

    let mut columns = vec!["p_abs".to_string()];
    columns.extend((1..=dim).map(|k| format!("lambda_{k}")));
    columns.push("max_imag".into());
    columns.push("dispersion_residual".into());
    let col_refs: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut doc = Document::new(Command::Spectrum.name(), cfg, &col_refs);

    let mut worst: f64 = 0.0;
    for &k in &grid {
        let p = Momentum([k * dir[0], k * dir[1], k * dir[2]]);
        let h = representation::hamiltonian(rep, &p)?;
        let mut values = eigenvalues(&h)?;
        values.sort_by(|a, b| b.re.total_cmp(&a.re));
        let max_imag = values.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        let residual = representation::dispersion_residual(rep, &p)?;
        worst = worst.max(residual);
        let mut row: Vec<Value> = vec![k.into()];
        row.extend(values.iter().map(|z| Value::Float(z.re)));
        row.push(max_imag.into());
        row.push(residual.into());
        doc.push_row(row);
    }
    doc.add_summary("dimension", dim);
    doc.add_summary("max_dispersion_residual", worst);
    Ok(doc)
}

// ------------------------------------------------------ operator dynamics

fn time_grid(cfg: &RunConfig, rep: &RepSpec, p: &Momentum) -> Result<Vec<f64>, Failure> {
    match cfg.tmax {
        Some(t) => Ok(dynamics::linspace(0.0, t, cfg.steps)?),
        None => Ok(dynamics::default_time_grid(dynamics::zitter_frequency(rep, p)?, cfg.steps)?),
    }
}

fn evolve_operator(cfg: &RunConfig) -> Result<Document, Failure> {
    let rep = &cfg.rep;
    let p = &cfg.center;
    let closed = ClosedForm::new(rep, p, cfg.axis)?;
    let oracle = HeisenbergOracle::new(rep, p, cfg.axis)?;
    let times = time_grid(cfg, rep, p)?;
    let (r, c) = cfg.entry_or_default();

    let mut doc = Document::new(
        Command::EvolveOperator.name(),
        cfg,
        &[
            "t",
            "v_closed_re",
            "v_closed_im",
            "v_numeric_re",
            "v_numeric_im",
            "v_residual",
            "dr_closed_re",
            "dr_closed_im",
            "dr_numeric_re",
            "dr_numeric_im",
            "dr_residual",
        ],
    );

    let dim = rep.dim();
    let mut dr_numeric = ComplexMatrix::zeros(dim);
    let (mut v_worst, mut dr_worst): (f64, f64) = (0.0, 0.0);
    let mut prev = 0.0;
    for &t in &times {
        if t > prev {
            let piece = oracle.integrate_velocity(prev, t, PIECEWISE_QUADRATURE_TOLERANCE)?;
            dr_numeric = &dr_numeric + &piece;
        }
        prev = t;
        let v_closed = closed.velocity(t);
        let v_numeric = oracle.velocity_physical(t)?;
        let dr_closed = closed.displacement(t);
        let v_res = v_closed.dist_max(&v_numeric);
        let dr_res = dr_closed.dist_max(&dr_numeric);
        if !(v_res.is_finite() && dr_res.is_finite()) {
            return Err(Failure::Numerical(format!("non-finite residual at t = {t}")));
        }
        v_worst = v_worst.max(v_res);
        dr_worst = dr_worst.max(dr_res);
        doc.push_row(vec![
            t.into(),
            v_closed[(r, c)].re.into(),
            v_closed[(r, c)].im.into(),
            v_numeric[(r, c)].re.into(),
            v_numeric[(r, c)].im.into(),
            v_res.into(),
            dr_closed[(r, c)].re.into(),
            dr_closed[(r, c)].im.into(),
            dr_numeric[(r, c)].re.into(),
            dr_numeric[(r, c)].im.into(),
            dr_res.into(),
        ]);
    }
    doc.add_summary("zitter_frequency", dynamics::zitter_frequency(rep, p)?);
    doc.add_summary("amplitude_max_entry", closed.amplitude().max_abs());
    doc.add_summary("max_v_residual", v_worst);
    doc.add_summary("max_dr_residual", dr_worst);
    Ok(doc)
}

// ---------------------------------------------------------------- packets

fn evolve_packet(cfg: &RunConfig) -> Result<Document, Failure> {
    let rep = &cfg.rep;
    let state = make_packet(
        rep,
        cfg.center,
        cfg.sigma,
        cfg.branch_mix(),
        cfg.samples,
        cfg.geometry,
        None,
    )?;
    let times = time_grid(cfg, rep, &cfg.center)?;
    let traj = packet_trajectory(&state, cfg.axis, &times)?;

    let mut doc = Document::new(
        Command::EvolvePacket.name(),
        cfg,
        &["t", "v_re", "dr_re", "signed_norm"],
    );
    for k in 0..times.len() {
        doc.push_row(vec![
            times[k].into(),
            traj.velocity[k].re.into(),
            traj.displacement[k].re.into(),
            traj.signed_norm[k].into(),
        ]);
    }

    let peak = traj.dominant_frequency()?;
    let fit = traj.drift_fit()?;
    let v = traj.velocity_re();
    doc.add_summary("expected_frequency", dynamics::zitter_frequency(rep, &cfg.center)?);
    doc.add_summary("frequency", peak.omega);
    doc.add_summary("frequency_resolution", peak.resolution);
    doc.add_summary("frequency_bin", peak.bin);
    doc.add_summary("amplitude", traj.oscillation_amplitude());
    doc.add_summary("drift_velocity", fit.slope);
    doc.add_summary("drift_fit_residual", fit.max_residual);
    doc.add_summary("mean_velocity", v.iter().sum::<f64>() / v.len() as f64);
    doc.add_summary("signed_norm", state.signed_norm());
    doc.add_summary("norm_drift", traj.norm_drift());
    if rep.kind() == RepKind::DiracLikePhoton {
        doc.add_summary("transversality_residual", state.transversality_residual()?);
    }
    Ok(doc)
}

// -------------------------------------------------------------- transform

/// Threshold for the block-diagonalization and inverse checks.
pub const TRANSFORM_TOLERANCE: f64 = 1e-10;

fn push_matrix(doc: &mut Document, name: &str, m: &ComplexMatrix) {
    for i in 0..m.dim() {
        for j in 0..m.dim() {
            doc.push_row(vec![
                name.into(),
                i.into(),
                j.into(),
                m[(i, j)].re.into(),
                m[(i, j)].im.into(),
            ]);
        }
    }
}

fn metric_name(g: &Metric) -> &'static str {
    if g.is_identity() {
        "identity"
    } else {
        "rho3"
    }
}

/// Largest gap between the columns of `U⁻¹` and the closed-form GFV
/// wave-function components for the two branches.
pub fn wavefunction_residual(inverse: &ComplexMatrix, eps: f64, n: f64, block: usize) -> f64 {
    let (pu, pl) = transform::gfv_wavefunction_coefficients(eps, n, Branch::Positive);
    let (nu, nl) = transform::gfv_wavefunction_coefficients(eps, n, Branch::Negative);
    let mut worst: f64 = 0.0;
    for k in 0..block {
        let (up, lo) = (k, k + block);
        for (got, want) in [
            (inverse[(up, up)], pu),
            (inverse[(lo, up)], pl),
            (inverse[(up, lo)], nu),
            (inverse[(lo, lo)], nl),
        ] {
            worst = worst.max((got - Complex64::new(want, 0.0)).norm());
        }
    }
    worst
}

fn transform(cfg: &RunConfig) -> Result<Outcome, Failure> {
    let rep = &cfg.rep;
    let p = &cfg.center;
    let op = transform::transform_for(rep, p)?;
    let h = op.transformed_hamiltonian()?;
    let v = representation::velocity_operator(rep, p)?;

    let mut doc = Document::new(Command::Transform.name(), cfg, &["matrix", "row", "col", "re", "im"]);
    push_matrix(&mut doc, "U", op.matrix());
    push_matrix(&mut doc, "U_inv", op.inverse());
    push_matrix(&mut doc, "H_transformed", &h);
    for (k, vk) in v.iter().enumerate() {
        push_matrix(&mut doc, &format!("v{}_transformed", k + 1), &apply_similarity(&op, vk)?);
    }

    let off_block = op.off_block_residual()?;
    let inverse = op.inverse_residual();
    doc.add_summary("source", op.source().label());
    doc.add_summary("target", op.target().label());
    doc.add_summary("metric", metric_name(op.metric()));
    doc.add_summary("pseudounitarity_residual", op.pseudounitarity_residual());
    doc.add_summary("inverse_residual", inverse);
    doc.add_summary("numeric_inverse_residual", op.numeric_inverse_residual()?);
    doc.add_summary("off_block_residual", off_block);
    doc.add_summary("fw_residual", op.fw_residual()?);

    if let Some(n) = rep.n_at(p) {
        let eps = energy(rep.mass(), p);
        for branch in [Branch::Positive, Branch::Negative] {
            let (upper, lower) = transform::gfv_wavefunction_coefficients(eps, n, branch);
            doc.add_summary(&format!("psi_{}_upper", branch.name()), upper);
            doc.add_summary(&format!("psi_{}_lower", branch.name()), lower);
        }
        doc.add_summary(
            "wavefunction_residual",
            wavefunction_residual(op.inverse(), eps, n, rep.block_dim()),
        );
    }

    let mut failed = Vec::new();
    if !(off_block <= TRANSFORM_TOLERANCE) {
        failed.push("off_block_residual".to_string());
    }
    if !(inverse <= TRANSFORM_TOLERANCE) {
        failed.push("inverse_residual".to_string());
    }
    Ok(Outcome { document: doc, failed })
}
