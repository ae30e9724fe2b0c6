mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use zitterkit_core::operator::{anticommutator, pseudo_adjoint, ComplexMatrix};
use zitterkit_core::representation::{
    self, acceleration_operator, dispersion_residual, hamiltonian, metric,
    photon_transversality_projector,
};
use zitterkit_core::spin::{self, check_spin_properties, spin_matrices};
use zitterkit_core::{energy, Momentum, RepSpec, SpinRep};

fn id(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n)
}

#[test]
fn ladder_spin_matrices() {
    assert!(check_spin_properties(&spin_matrices(SpinRep::ONE), 1e-14).unwrap().passed());
    // the triple-product and S² = 2 identities are specific to spin 1
    for twice in 0..=8 {
        let s = SpinRep::from_twice(twice);
        let m = spin_matrices(s);
        let report = check_spin_properties(&m, 1e-12).unwrap();
        assert!(report.commutation_ok(), "2s = {twice}: {report:?}");
        let n = s.multiplicity();
        let sq = m.iter().fold(ComplexMatrix::zeros(n), |acc, x| &acc + &(x * x));
        let v = s.value();
        assert!(sq.approx_eq(&id(n).scale_real(v * (v + 1.0)), 1e-12));
    }
}

#[test]
fn photon_spin_blocks_satisfy_all_identities() {
    let report = check_spin_properties(&spin::spin1_triple(), 1e-14).unwrap();
    assert!(report.passed());
}

#[test]
fn dirac_clifford() {
    assert!(spin::dirac_clifford_residual(&spin::dirac_matrices()) < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn half_spin_helicity_squares_to_quarter_p2(p in common::momentum()) {
        let sp = spin::dot(&spin::pauli_triple(), p.0).scale_real(0.5);
        let sq = &sp * &sp;
        prop_assert!(sq.approx_eq(&id(2).scale_real(p.norm_sqr() / 4.0), 1e-12));
    }

    #[test]
    fn dirac_hamiltonian_squares_to_energy(p in common::momentum(), m in common::mass()) {
        let h = hamiltonian(&RepSpec::dirac(m).unwrap(), &p).unwrap();
        let e2 = energy(m, &p).powi(2);
        prop_assert!((&h * &h).approx_eq(&id(4).scale_real(e2), 1e-12 * e2.max(1.0)));
    }

    #[test]
    fn gfv_hamiltonian_squares_to_energy(
        p in common::momentum(), m in common::mass(), s in common::spin(), n in common::gfv_n()
    ) {
        let rep = RepSpec::gfv(m, s, Some(n)).unwrap();
        let h = hamiltonian(&rep, &p).unwrap();
        let e2 = energy(m, &p).powi(2);
        let scale = h.max_abs().powi(2).max(1.0);
        prop_assert!((&h * &h).approx_eq(&id(rep.dim()).scale_real(e2), 1e-13 * scale));
    }

    #[test]
    fn gfv_hamiltonian_pseudo_hermitian(
        p in common::momentum(), m in common::mass(), s in common::spin(), n in common::gfv_n()
    ) {
        let rep = RepSpec::gfv(m, s, Some(n)).unwrap();
        let h = hamiltonian(&rep, &p).unwrap();
        let hd = pseudo_adjoint(&h, &metric(&rep)).unwrap();
        prop_assert!(hd.approx_eq(&h, 1e-12 * h.max_abs().max(1.0)));
    }

    #[test]
    fn photon_squared_constraint(p in common::momentum(), re in prop::array::uniform6(-1.0f64..1.0)) {
        // [p² − (α·p)²]Ψ = [p² − (Σ·p)²]Ψ = 0 for transverse Ψ
        let pt = photon_transversality_projector(&p).unwrap();
        let raw: Vec<Complex64> = re.iter().map(|&x| Complex64::new(x, 0.5 * x)).collect();
        let psi = pt.mul_vec(&raw);
        let ap = spin::dot(&spin::photon_alpha_triple(), p.0);
        let sp = spin::dot(&spin::photon_sigma_triple(), p.0);
        let p2 = id(6).scale_real(p.norm_sqr());
        for op in [&p2 - &(&ap * &ap), &p2 - &(&sp * &sp)] {
            let out = op.mul_vec(&psi);
            prop_assert!(out.iter().all(|z| z.norm() < 1e-12));
        }
    }

    #[test]
    fn photon_alpha_beta_anticommute(i in 1usize..=3) {
        let a = spin::photon_alpha(i).unwrap();
        let ac = anticommutator(&a, &spin::photon_beta()).unwrap();
        prop_assert_eq!(ac.max_abs(), 0.0);
    }

    #[test]
    fn dispersion_all_representations((rep, p) in common::rep_and_momentum()) {
        let r = dispersion_residual(&rep, &p).unwrap();
        prop_assert!(r <= 1e-10 * energy(rep.mass(), &p).max(1.0), "{} at {p}: {r}", rep.label());
    }

    #[test]
    fn acceleration_identity_all_representations((rep, p) in common::rep_and_momentum()) {
        let acc = acceleration_operator(&rep, &p).unwrap();
        let scale = hamiltonian(&rep, &p).unwrap().max_abs().max(1.0).powi(2);
        prop_assert!(acc.identity_residual <= 1e-12 * scale, "{}: {}", rep.label(), acc.identity_residual);
    }

    #[test]
    fn branch_projectors_resolve_physical_identity((rep, p) in common::rep_and_momentum()) {
        let bp = representation::branch_projectors(&rep, &p).unwrap();
        let phys = representation::physical_projector(&rep, &p).unwrap();
        let sum = &bp.positive + &bp.negative;
        prop_assert!(sum.approx_eq(&phys, 1e-9));
        prop_assert!((&bp.positive * &bp.negative).max_abs() < 1e-9);
        let rank = bp.positive.trace().re;
        prop_assert!((rank - phys.trace().re / 2.0).abs() < 1e-9);
    }
}

#[test]
fn fv_spectrum_at_rest() {
    let h = hamiltonian(&RepSpec::feshbach_villars(2.0).unwrap(), &Momentum::ZERO).unwrap();
    let eig = zitterkit_core::operator::eigenvalues(&h).unwrap();
    let mut re: Vec<f64> = eig.iter().map(|z| z.re).collect();
    re.sort_by(f64::total_cmp);
    assert_eq!(re, vec![-2.0, 2.0]);
}
