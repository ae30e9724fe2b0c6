//! Matrix constants: Pauli ρ-matrices, Dirac α/β/γ, spin-1 matrices and the
//! 6×6 photon blocks, plus identity checks for spin-matrix triples.
//!
//! Conventions are frozen to a single explicit form (Dirac representation,
//! Cartesian antisymmetric spin-1 triple with `(S_i)_{jk} = −i ε_{ijk}`), so
//! golden outputs are stable.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::momentum::Momentum;
use crate::operator::{anticommutator, commutator, ComplexMatrix, I, ONE, ZERO};

/// Spin magnitude stored as `2s`, so half-integers are exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinRep {
    twice: u32,
}

impl SpinRep {
    pub const ZERO: SpinRep = SpinRep { twice: 0 };
    pub const HALF: SpinRep = SpinRep { twice: 1 };
    pub const ONE: SpinRep = SpinRep { twice: 2 };

    pub fn from_twice(twice: u32) -> Self {
        Self { twice }
    }

    /// Accepts non-negative integers and half-integers.
    pub fn new(s: f64) -> Result<Self> {
        let twice = 2.0 * s;
        if !(s >= 0.0) || (twice - twice.round()).abs() > 1e-12 || twice > 64.0 {
            return Err(Error::InvalidArgument(format!(
                "spin must be a non-negative half-integer, got {s}"
            )));
        }
        Ok(Self {
            twice: twice.round() as u32,
        })
    }

    pub fn value(self) -> f64 {
        f64::from(self.twice) / 2.0
    }

    pub fn twice(self) -> u32 {
        self.twice
    }

    /// Number of components `2s + 1`.
    pub fn multiplicity(self) -> usize {
        self.twice as usize + 1
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn axis_check(i: usize) -> Result<()> {
    if (1..=3).contains(&i) {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange {
            index: i,
            min: 1,
            max: 3,
        })
    }
}

/// Pauli matrix ρ_i, `i ∈ {1, 2, 3}`.
pub fn pauli(i: usize) -> Result<ComplexMatrix> {
    axis_check(i)?;
    let rows: [[Complex64; 2]; 2] = match i {
        1 => [[ZERO, ONE], [ONE, ZERO]],
        2 => [[ZERO, -I], [I, ZERO]],
        _ => [[ONE, ZERO], [ZERO, -ONE]],
    };
    ComplexMatrix::from_rows(&[&rows[0], &rows[1]])
}

/// Cartesian spin-1 matrix S_i with `(S_i)_{jk} = −i ε_{ijk}`.
pub fn spin1(i: usize) -> Result<ComplexMatrix> {
    axis_check(i)?;
    Ok(ComplexMatrix::from_fn(3, |j, k| {
        -I * levi_civita(i - 1, j, k)
    }))
}

fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

fn triple(f: impl Fn(usize) -> Result<ComplexMatrix>) -> [ComplexMatrix; 3] {
    [1, 2, 3].map(|i| f(i).expect("axis index in range"))
}

pub fn pauli_triple() -> [ComplexMatrix; 3] {
    triple(pauli)
}

pub fn spin1_triple() -> [ComplexMatrix; 3] {
    triple(spin1)
}

/// 2×2 block matrix `[[a, b], [c, d]]` from equally sized blocks.
pub fn block2(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    d: &ComplexMatrix,
) -> ComplexMatrix {
    let n = a.dim();
    ComplexMatrix::from_fn(2 * n, |i, j| {
        let blk = match (i < n, j < n) {
            (true, true) => a,
            (true, false) => b,
            (false, true) => c,
            (false, false) => d,
        };
        blk[(i % n, j % n)]
    })
}

fn off_diagonal(s: &ComplexMatrix) -> ComplexMatrix {
    let z = ComplexMatrix::zeros(s.dim());
    block2(&z, s, s, &z)
}

fn diagonal_blocks(s: &ComplexMatrix) -> ComplexMatrix {
    let z = ComplexMatrix::zeros(s.dim());
    block2(s, &z, &z, s)
}

fn beta_of(n: usize) -> ComplexMatrix {
    let id = ComplexMatrix::identity(n);
    let z = ComplexMatrix::zeros(n);
    block2(&id, &z, &z, &-&id)
}

/// Dirac-representation matrices.
#[derive(Debug, Clone)]
pub struct DiracMatrices {
    pub alpha: [ComplexMatrix; 3],
    pub beta: ComplexMatrix,
    pub gamma: [ComplexMatrix; 3],
}

/// β = diag(I₂, −I₂), α_i = offdiag(ρ_i, ρ_i), γ_i = β α_i.
pub fn dirac_matrices() -> DiracMatrices {
    let alpha = pauli_triple().map(|s| off_diagonal(&s));
    let beta = beta_of(2);
    let gamma = alpha.clone().map(|a| &beta * &a);
    DiracMatrices { alpha, beta, gamma }
}

/// 4×4 Dirac spin matrix Σ_i = diag(ρ_i, ρ_i).
pub fn dirac_sigma(i: usize) -> Result<ComplexMatrix> {
    Ok(diagonal_blocks(&pauli(i)?))
}

/// Photon α_i = offdiag(S_i, S_i).
pub fn photon_alpha(i: usize) -> Result<ComplexMatrix> {
    Ok(off_diagonal(&spin1(i)?))
}

/// Photon β = diag(I₃, −I₃).
pub fn photon_beta() -> ComplexMatrix {
    beta_of(3)
}

/// Photon spin operator Σ_i = diag(S_i, S_i).
pub fn photon_sigma(i: usize) -> Result<ComplexMatrix> {
    Ok(diagonal_blocks(&spin1(i)?))
}

pub fn photon_alpha_triple() -> [ComplexMatrix; 3] {
    triple(photon_alpha)
}

pub fn photon_sigma_triple() -> [ComplexMatrix; 3] {
    triple(photon_sigma)
}

/// Spin-½ operators for Dirac spinors, `s = Σ/2`.
pub fn dirac_spin_triple() -> [ComplexMatrix; 3] {
    triple(dirac_sigma).map(|m| m.scale_real(0.5))
}

/// Angular-momentum matrices for general spin in the `S_z`-diagonal
/// (ladder) basis, ordered `m = s, s−1, …, −s`.
///
/// For `s = 1` this is unitarily equivalent to, but not equal to,
/// [`spin1_triple`].
pub fn spin_matrices(spin: SpinRep) -> [ComplexMatrix; 3] {
    let n = spin.multiplicity();
    let s = spin.value();
    let m_of = |k: usize| s - k as f64;
    // S₊ raises m: nonzero entries at (k−1, k).
    let raise = ComplexMatrix::from_fn(n, |r, col| {
        if col >= 1 && r == col - 1 {
            let m = m_of(col);
            c((s * (s + 1.0) - m * (m + 1.0)).sqrt(), 0.0)
        } else {
            ZERO
        }
    });
    let lower = raise.adjoint();
    let sx = (&raise + &lower).scale_real(0.5);
    let sy = (&raise - &lower).scale(c(0.0, -0.5));
    let sz = ComplexMatrix::from_diagonal(&(0..n).map(|k| c(m_of(k), 0.0)).collect::<Vec<_>>());
    [sx, sy, sz]
}

/// Residuals of the three spin-matrix identities.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinPropertyReport {
    /// max over i, j of `‖[S_i, S_j] − i ε_ijk S_k‖`.
    pub commutation: f64,
    /// max over i, j, k of `‖S_iS_jS_k + S_kS_jS_i − δ_ij S_k − δ_jk S_i‖`.
    pub triple_product: f64,
    /// `‖S² − 2I‖`.
    pub casimir: f64,
    pub tol: f64,
}

impl SpinPropertyReport {
    pub fn commutation_ok(&self) -> bool {
        self.commutation <= self.tol
    }

    pub fn triple_product_ok(&self) -> bool {
        self.triple_product <= self.tol
    }

    pub fn casimir_ok(&self) -> bool {
        self.casimir <= self.tol
    }

    pub fn passed(&self) -> bool {
        self.commutation_ok() && self.triple_product_ok() && self.casimir_ok()
    }

    pub fn max_residual(&self) -> f64 {
        self.commutation.max(self.triple_product).max(self.casimir)
    }
}

/// Checks `[S_i,S_j] = iε_ijk S_k`, the symmetric triple-product identity
/// and `S² = 2I` for the given triple.
pub fn check_spin_properties(s: &[ComplexMatrix; 3], tol: f64) -> Result<SpinPropertyReport> {
    let n = s[0].dim();
    for m in &s[1..] {
        if m.dim() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: m.dim(),
            });
        }
    }
    let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };

    let mut commutation: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let lhs = commutator(&s[i], &s[j])?;
            let mut rhs = ComplexMatrix::zeros(n);
            for k in 0..3 {
                let e = levi_civita(i, j, k);
                if e != 0.0 {
                    rhs = &rhs + &s[k].scale(c(0.0, e));
                }
            }
            commutation = commutation.max(lhs.dist_max(&rhs));
        }
    }

    let mut triple_product: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let lhs = &(&(&s[i] * &s[j]) * &s[k]) + &(&(&s[k] * &s[j]) * &s[i]);
                let rhs = &s[k].scale_real(delta(i, j)) + &s[i].scale_real(delta(j, k));
                triple_product = triple_product.max(lhs.dist_max(&rhs));
            }
        }
    }

    let sq = s.iter().fold(ComplexMatrix::zeros(n), |acc, m| &acc + &(m * m));
    let casimir = sq.dist_max(&ComplexMatrix::identity(n).scale_real(2.0));

    Ok(SpinPropertyReport {
        commutation,
        triple_product,
        casimir,
        tol,
    })
}

/// Helicity operator `(S·p)/|p|`.
pub fn helicity_matrix(s: &[ComplexMatrix; 3], p: &Momentum) -> Result<ComplexMatrix> {
    let dir = p
        .direction()
        .map_err(|_| Error::ZeroMomentum("helicity is undefined at zero momentum"))?;
    Ok(dot(s, dir))
}

/// `Σ_i a_i M_i`.
pub fn dot(m: &[ComplexMatrix; 3], a: [f64; 3]) -> ComplexMatrix {
    &(&m[0].scale_real(a[0]) + &m[1].scale_real(a[1])) + &m[2].scale_real(a[2])
}

/// Maximum residual of the Dirac algebra `{α_i, α_j} = 2δ_ij`, `{α_i, β} = 0`,
/// `β² = I`.
pub fn dirac_clifford_residual(d: &DiracMatrices) -> f64 {
    let id = ComplexMatrix::identity(4);
    let mut r: f64 = (&d.beta * &d.beta).dist_max(&id);
    for i in 0..3 {
        for j in 0..3 {
            let ac = anticommutator(&d.alpha[i], &d.alpha[j]).expect("4x4");
            let target = if i == j { id.scale_real(2.0) } else { ComplexMatrix::zeros(4) };
            r = r.max(ac.dist_max(&target));
        }
        r = r.max(anticommutator(&d.alpha[i], &d.beta).expect("4x4").max_abs());
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::eig_decompose;

    #[test]
    fn pauli_three_is_diag() {
        let r3 = pauli(3).unwrap();
        assert_eq!(r3, ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap());
        assert!(pauli(0).is_err());
        assert!(pauli(4).is_err());
    }

    #[test]
    fn pauli_products() {
        let r1 = pauli(1).unwrap();
        assert_eq!(&r1 * &r1, ComplexMatrix::identity(2));
        // direct 2×2 product oracle
        let r2 = pauli(2).unwrap();
        let prod = &r1 * &r2;
        let expected = ComplexMatrix::from_rows(&[&[I, ZERO], &[ZERO, -I]]).unwrap();
        assert_eq!(prod, expected);
        assert_eq!(pauli(3).unwrap().scale(I), expected);
    }

    #[test]
    fn spin1_matches_printed_form() {
        let s3 = spin1(3).unwrap();
        assert_eq!(s3.row(0), &[ZERO, -I, ZERO]);
        assert_eq!(s3.row(1), &[I, ZERO, ZERO]);
        let s1 = spin1(1).unwrap();
        assert_eq!(s1.row(1), &[ZERO, ZERO, -I]);
        assert_eq!(s1.row(2), &[ZERO, I, ZERO]);
        let s2 = spin1(2).unwrap();
        assert_eq!(s2.row(0), &[ZERO, ZERO, I]);
        assert_eq!(s2.row(2), &[-I, ZERO, ZERO]);
        for i in 1..=3 {
            let s = spin1(i).unwrap();
            // Hermitian + purely imaginary ⇒ antisymmetric
            assert_eq!((&s - &s.adjoint()).max_abs(), 0.0);
            assert_eq!((&s + &s.transpose()).max_abs(), 0.0);
        }
        assert!(spin1(0).is_err());
    }

    #[test]
    fn spin1_commutator_gives_s3() {
        let lhs = commutator(&spin1(1).unwrap(), &spin1(2).unwrap()).unwrap();
        assert_eq!(lhs, spin1(3).unwrap().scale(I));
    }

    #[test]
    fn canonical_spin1_passes_all_identities() {
        let report = check_spin_properties(&spin1_triple(), 1e-15).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.max_residual(), 0.0);
    }

    #[test]
    fn half_pauli_fails_casimir_only_for_commutation() {
        let half = pauli_triple().map(|m| m.scale_real(0.5));
        let report = check_spin_properties(&half, 1e-14).unwrap();
        assert!(report.commutation_ok());
        assert!(!report.casimir_ok());
        // S² = ¾ I, so ‖S² − 2I‖ = 5/4
        assert!((report.casimir - 1.25).abs() < 1e-15);
    }

    #[test]
    fn zero_triple() {
        let z = [ComplexMatrix::zeros(3), ComplexMatrix::zeros(3), ComplexMatrix::zeros(3)];
        let report = check_spin_properties(&z, 1e-12).unwrap();
        assert!(report.commutation_ok());
        assert!(!report.casimir_ok());
        assert!(!report.passed());
    }

    #[test]
    fn dirac_algebra() {
        let d = dirac_matrices();
        assert_eq!(dirac_clifford_residual(&d), 0.0);
        for i in 0..3 {
            assert_eq!(d.gamma[i], &d.beta * &d.alpha[i]);
        }
    }

    #[test]
    fn photon_block_structure() {
        let b = photon_beta();
        assert_eq!(&b * &b, ComplexMatrix::identity(6));
        let a3 = photon_alpha(3).unwrap();
        assert_eq!(a3.block(0, 3, 3), spin1(3).unwrap());
        assert_eq!(a3.block(3, 0, 3), spin1(3).unwrap());
        assert_eq!(a3.block(0, 0, 3).max_abs(), 0.0);
        let sig = photon_sigma(2).unwrap();
        assert_eq!(sig.block(0, 0, 3), spin1(2).unwrap());
        assert_eq!(sig.block(3, 3, 3), spin1(2).unwrap());
        assert!(photon_alpha(7).is_err());
    }

    #[test]
    fn photon_commutation_table() {
        // Explicit products: αβ = [[0, −S], [S, 0]], βα = [[0, S], [−S, 0]],
        // hence {α_i, β} = 0 while [α_i, β] = 2αβ ≠ 0.
        let b = photon_beta();
        for i in 1..=3 {
            let a = photon_alpha(i).unwrap();
            let s = spin1(i).unwrap();
            let z = ComplexMatrix::zeros(3);
            assert_eq!(&a * &b, block2(&z, &-&s, &s, &z));
            assert_eq!(&b * &a, block2(&z, &s, &-&s, &z));
            assert_eq!(anticommutator(&a, &b).unwrap().max_abs(), 0.0);
            assert_eq!(commutator(&a, &b).unwrap(), (&a * &b).scale_real(2.0));
        }
        // The photon α's are not a Clifford set: {α₁, α₁} = 2 diag(S₁², S₁²).
        let a1 = photon_alpha(1).unwrap();
        let s1 = spin1(1).unwrap();
        let ac = anticommutator(&a1, &a1).unwrap();
        assert_eq!(ac, diagonal_blocks(&(&s1 * &s1)).scale_real(2.0));
        assert!(ac.dist_max(&ComplexMatrix::identity(6).scale_real(2.0)) > 1.0);
    }

    #[test]
    fn dirac_helicity_eigenvalues() {
        let p = Momentum::new(0.0, 0.0, 1.0).unwrap();
        let h = helicity_matrix(&dirac_spin_triple(), &p).unwrap();
        let eig = eig_decompose(&h).unwrap();
        let vals: Vec<f64> = eig.values.iter().map(|z| z.re).collect();
        assert_eq!(vals, vec![0.5, 0.5, -0.5, -0.5]);
    }

    #[test]
    fn photon_helicity_eigenvalues() {
        let p = Momentum::new(0.0, 0.0, 1.0).unwrap();
        let h = helicity_matrix(&photon_sigma_triple(), &p).unwrap();
        let eig = eig_decompose(&h).unwrap();
        let vals: Vec<f64> = eig.values.iter().map(|z| z.re).collect();
        let expected = [1.0, 1.0, 0.0, 0.0, -1.0, -1.0];
        for (v, e) in vals.iter().zip(expected) {
            assert!((v - e).abs() < 1e-14);
        }
    }

    #[test]
    fn helicity_needs_momentum() {
        assert!(matches!(
            helicity_matrix(&dirac_spin_triple(), &Momentum::ZERO),
            Err(Error::ZeroMomentum(_))
        ));
    }

    #[test]
    fn squared_dirac_helicity() {
        let p = Momentum::new(0.3, -1.2, 0.7).unwrap();
        let sp = dot(&dirac_spin_triple(), p.0);
        let sq = &sp * &sp;
        let expected = ComplexMatrix::identity(4).scale_real(p.norm_sqr() / 4.0);
        assert!(sq.approx_eq(&expected, 1e-15));
    }

    #[test]
    fn ladder_matrices() {
        for twice in 0..6 {
            let spin = SpinRep::from_twice(twice);
            let s = spin_matrices(spin);
            let report = check_spin_properties(&s, 1e-13).unwrap();
            assert!(report.commutation_ok(), "2s={twice}: {report:?}");
            let sq = s.iter().fold(ComplexMatrix::zeros(spin.multiplicity()), |a, m| &a + &(m * m));
            let sv = spin.value();
            let expected = ComplexMatrix::identity(spin.multiplicity()).scale_real(sv * (sv + 1.0));
            assert!(sq.approx_eq(&expected, 1e-13));
        }
        // s = ½ ladder form is ρ/2 exactly
        let half = spin_matrices(SpinRep::HALF);
        for (m, r) in half.iter().zip(pauli_triple()) {
            assert!(m.approx_eq(&r.scale_real(0.5), 1e-16));
        }
        // s = 1 ladder form satisfies the printed identities too
        assert!(check_spin_properties(&spin_matrices(SpinRep::ONE), 1e-14).unwrap().passed());
    }

    #[test]
    fn spin_rep_parsing() {
        assert_eq!(SpinRep::new(1.5).unwrap().multiplicity(), 4);
        assert!(SpinRep::new(0.3).is_err());
        assert!(SpinRep::new(-0.5).is_err());
        assert!(SpinRep::new(f64::NAN).is_err());
    }
}
