//! Eigendecomposition of small dense complex matrices.
//!
//! Eigenvalues come from a Householder reduction to Hessenberg form followed
//! by a Wilkinson-shifted complex QR iteration. Eigenvectors are then built
//! per eigenvalue cluster as the null space of `A - λI`, found by complete
//! pivoting. That gives a canonical basis inside degenerate eigenspaces
//! (free variables set to unit vectors) which is then orthonormalized, so
//! repeated runs produce the same projectors bit for bit.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ZERO};
use crate::error::{Error, Result};

/// Eigenvector matrices with a condition estimate above this are rejected.
pub const MAX_EIGENVECTOR_CONDITION: f64 = 1e10;

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

/// Right eigenpairs `A V = V diag(values)` plus the cached inverse of `V`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Eigenvalues, descending by real part, then by imaginary part.
    pub values: Vec<Complex64>,
    /// Column `k` is the eigenvector of `values[k]`.
    pub vectors: ComplexMatrix,
    /// `vectors⁻¹`; row `k` is the left eigenvector dual to column `k`.
    pub inverse: ComplexMatrix,
    /// `‖V‖₁ ‖V⁻¹‖₁`.
    pub condition: f64,
}

impl EigenDecomposition {
    /// Rebuilds `V f(Λ) V⁻¹` for a scalar function of the eigenvalues.
    pub fn apply_fn(&self, f: impl Fn(Complex64) -> Complex64) -> ComplexMatrix {
        let n = self.values.len();
        let fvals: Vec<Complex64> = self.values.iter().map(|&l| f(l)).collect();
        let mut scaled = self.vectors.clone();
        for j in 0..n {
            for i in 0..n {
                scaled[(i, j)] *= fvals[j];
            }
        }
        &scaled * &self.inverse
    }

    /// Spectral projector onto the eigenvalues selected by `keep`.
    pub fn projector(&self, keep: impl Fn(Complex64) -> bool) -> ComplexMatrix {
        self.apply_fn(|l| if keep(l) { Complex64::new(1.0, 0.0) } else { ZERO })
    }

    /// `‖A V − V Λ‖_max`.
    pub fn residual(&self, a: &ComplexMatrix) -> f64 {
        let lhs = a * &self.vectors;
        let mut rhs = self.vectors.clone();
        for j in 0..self.values.len() {
            for i in 0..self.values.len() {
                rhs[(i, j)] *= self.values[j];
            }
        }
        lhs.dist_max(&rhs)
    }
}

/// Eigenvalues of `a` (unsorted, with multiplicity).
pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<Complex64>> {
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let mut h = hessenberg(a);
    shifted_qr(&mut h)?;
    Ok(h.diagonal())
}

/// Full eigendecomposition; fails for defective or nearly defective input.
pub fn eig_decompose(a: &ComplexMatrix) -> Result<EigenDecomposition> {
    let n = a.dim();
    let raw = eigenvalues(a)?;
    let anorm = a.max_abs();
    let cluster_tol = 1e-8 * anorm.max(1.0);
    let clusters = cluster_eigenvalues(&raw, cluster_tol);

    let mut values = Vec::with_capacity(n);
    let mut vectors = ComplexMatrix::zeros(n);
    let mut col = 0;
    for cluster in &clusters {
        let basis = null_space(a, cluster.value, cluster.multiplicity)?;
        for v in basis {
            vectors.set_column(col, &v);
            values.push(cluster.value);
            col += 1;
        }
    }

    let decomposition = {
        let inverse = vectors
            .inverse()
            .map_err(|_| Error::IllConditioned { condition: f64::INFINITY })?;
        let condition = vectors.norm_one() * inverse.norm_one();
        EigenDecomposition {
            values,
            vectors,
            inverse,
            condition,
        }
    };
    if !(decomposition.condition <= MAX_EIGENVECTOR_CONDITION) {
        return Err(Error::IllConditioned {
            condition: decomposition.condition,
        });
    }
    // A defective eigenvalue shows up as a basis that does not satisfy AV = VΛ.
    if decomposition.residual(a) > 1e-8 * anorm.max(1.0) {
        return Err(Error::IllConditioned {
            condition: f64::INFINITY,
        });
    }
    Ok(decomposition)
}

struct Cluster {
    value: Complex64,
    multiplicity: usize,
}

/// Groups eigenvalues closer than `tol` (transitively) and orders the groups.
fn cluster_eigenvalues(raw: &[Complex64], tol: f64) -> Vec<Cluster> {
    let n = raw.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (raw[i] - raw[j]).norm() <= tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: Vec<(usize, Vec<Complex64>)> = Vec::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        match groups.iter_mut().find(|(r, _)| *r == root) {
            Some((_, members)) => members.push(raw[i]),
            None => groups.push((root, vec![raw[i]])),
        }
    }
    let mut clusters: Vec<Cluster> = groups
        .into_iter()
        .map(|(_, members)| {
            let k = members.len();
            let value = members.iter().sum::<Complex64>() / k as f64;
            Cluster {
                value,
                multiplicity: k,
            }
        })
        .collect();
    clusters.sort_by(|a, b| {
        if (a.value.re - b.value.re).abs() > tol {
            b.value.re.total_cmp(&a.value.re)
        } else {
            b.value.im.total_cmp(&a.value.im)
        }
    });
    clusters
}

/// Orthonormal basis of `ker(A − λI)` of the given dimension.
///
/// Complete pivoting eliminates `n − k` columns; the `k` remaining (free)
/// columns each seed one null vector. Vectors are ordered by the original
/// index of their free column, orthonormalized with two Gram-Schmidt
/// passes, and phase-fixed so the largest entry is real and positive.
fn null_space(a: &ComplexMatrix, lambda: Complex64, k: usize) -> Result<Vec<Vec<Complex64>>> {
    let n = a.dim();
    let rank = n - k;
    let mut m = a.clone();
    for i in 0..n {
        m[(i, i)] -= lambda;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let scale = m.max_abs().max(f64::MIN_POSITIVE);
    for step in 0..rank {
        let (mut pi, mut pj, mut best) = (step, step, -1.0);
        for i in step..n {
            for j in step..n {
                let v = m[(i, j)].norm();
                if v > best {
                    best = v;
                    pi = i;
                    pj = j;
                }
            }
        }
        if best <= 1e-13 * scale {
            // Rank dropped early: the eigenvalue has larger geometric
            // multiplicity than the clustering found.
            return Err(Error::IllConditioned {
                condition: f64::INFINITY,
            });
        }
        m.swap_rows(step, pi);
        if pj != step {
            for i in 0..n {
                let tmp = m[(i, step)];
                m[(i, step)] = m[(i, pj)];
                m[(i, pj)] = tmp;
            }
            perm.swap(step, pj);
        }
        let pivot = m[(step, step)];
        for i in step + 1..n {
            let f = m[(i, step)] / pivot;
            if f == ZERO {
                continue;
            }
            for j in step..n {
                let s = m[(step, j)];
                m[(i, j)] -= f * s;
            }
        }
    }

    let mut free: Vec<usize> = (rank..n).collect();
    free.sort_by_key(|&f| perm[f]);
    let mut basis = Vec::with_capacity(k);
    for &f in &free {
        let mut x = vec![ZERO; n];
        x[f] = Complex64::new(1.0, 0.0);
        for row in (0..rank).rev() {
            let mut acc = ZERO;
            for c in row + 1..n {
                acc += m[(row, c)] * x[c];
            }
            x[row] = -acc / m[(row, row)];
        }
        let mut v = vec![ZERO; n];
        for c in 0..n {
            v[perm[c]] = x[c];
        }
        basis.push(v);
    }

    for _pass in 0..2 {
        for i in 0..basis.len() {
            let (done, rest) = basis.split_at_mut(i);
            let v = &mut rest[0];
            for u in done.iter() {
                let proj: Complex64 = u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
                for (vj, uj) in v.iter_mut().zip(u) {
                    *vj -= proj * uj;
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm <= 1e-300 {
                return Err(Error::IllConditioned {
                    condition: f64::INFINITY,
                });
            }
            for vj in v.iter_mut() {
                *vj /= norm;
            }
        }
    }
    for v in &mut basis {
        fix_phase(v);
    }
    Ok(basis)
}

/// Rotates `v` so that its largest-modulus entry (first one on ties) is
/// real and positive.
pub fn fix_phase(v: &mut [Complex64]) {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    let pivot = v
        .iter()
        .position(|z| z.norm() >= max * (1.0 - 1e-12))
        .expect("max entry exists");
    let phase = v[pivot].conj() / v[pivot].norm();
    for z in v.iter_mut() {
        *z *= phase;
    }
    v[pivot] = Complex64::new(v[pivot].re, 0.0);
}

/// Householder reduction to upper Hessenberg form (similarity transform).
fn hessenberg(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.dim();
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let tail: f64 = x[1..].iter().map(|z| z.norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let phase = if x[0].norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x[0] / x[0].norm()
        };
        let mut v = x.clone();
        v[0] += phase * xnorm;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut v {
            *z /= vnorm;
        }
        // H ← (I − 2vv†) H on rows k+1..n
        for j in 0..n {
            let mut dot = ZERO;
            for (t, vi) in v.iter().enumerate() {
                dot += vi.conj() * h[(k + 1 + t, j)];
            }
            for (t, vi) in v.iter().enumerate() {
                h[(k + 1 + t, j)] -= 2.0 * vi * dot;
            }
        }
        // H ← H (I − 2vv†) on columns k+1..n
        for i in 0..n {
            let mut dot = ZERO;
            for (t, vi) in v.iter().enumerate() {
                dot += h[(i, k + 1 + t)] * vi;
            }
            for (t, vi) in v.iter().enumerate() {
                h[(i, k + 1 + t)] -= 2.0 * dot * vi.conj();
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    h
}

/// Reduces a Hessenberg matrix to upper triangular form in place (only the
/// diagonal is meaningful afterwards).
fn shifted_qr(h: &mut ComplexMatrix) -> Result<()> {
    let n = h.dim();
    if n == 0 {
        return Ok(());
    }
    let anorm = h.max_abs();
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    while hi > 0 {
        // Find the start of the unreduced block ending at `hi`.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let diag = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            if sub <= f64::EPSILON * diag || sub <= 0.5 * f64::EPSILON * anorm {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if iter > MAX_SWEEPS_PER_EIGENVALUE {
            return Err(Error::NonConvergence { iterations: total });
        }

        let shift = if iter.is_multiple_of(11) {
            // Exceptional shift to break cycles.
            h[(hi, hi)] + Complex64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        for i in lo..=hi {
            h[(i, i)] -= shift;
        }
        let mut rotations = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let a = h[(k, k)];
            let b = h[(k + 1, k)];
            let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
            let (c, s) = if r == 0.0 {
                (Complex64::new(1.0, 0.0), ZERO)
            } else {
                (a / r, b / r)
            };
            for j in k..=hi {
                let (x, y) = (h[(k, j)], h[(k + 1, j)]);
                h[(k, j)] = c.conj() * x + s.conj() * y;
                h[(k + 1, j)] = -s * x + c * y;
            }
            rotations.push((c, s));
        }
        for (offset, &(c, s)) in rotations.iter().enumerate() {
            let k = lo + offset;
            for i in lo..=hi.min(k + 2) {
                let (x, y) = (h[(i, k)], h[(i, k + 1)]);
                h[(i, k)] = x * c + y * s;
                h[(i, k + 1)] = -x * s.conj() + y * c.conj();
            }
        }
        for i in lo..=hi {
            h[(i, i)] += shift;
        }
    }
    Ok(())
}

/// Eigenvalue of the trailing 2×2 block closest to its bottom-right entry.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let l1 = mean + disc;
    let l2 = mean - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_matrix_sorted_descending() {
        let a = ComplexMatrix::from_diagonal(&[c(-1.0, 0.0), c(3.0, 0.0), c(0.5, 0.0)]);
        let eig = eig_decompose(&a).unwrap();
        let re: Vec<f64> = eig.values.iter().map(|z| z.re).collect();
        assert_eq!(re, vec![3.0, 0.5, -1.0]);
        assert!(eig.residual(&a) < 1e-15);
    }

    #[test]
    fn ties_broken_by_imaginary_part() {
        let a = ComplexMatrix::from_diagonal(&[c(1.0, -2.0), c(1.0, 2.0)]);
        let eig = eig_decompose(&a).unwrap();
        assert_eq!(eig.values[0], c(1.0, 2.0));
        assert_eq!(eig.values[1], c(1.0, -2.0));
    }

    #[test]
    fn swap_matrix_converges() {
        // Zero diagonal: an unshifted QR step would stall here.
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let eig = eig_decompose(&a).unwrap();
        assert!((eig.values[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((eig.values[1] - c(-1.0, 0.0)).norm() < 1e-15);
        assert!(eig.residual(&a) < 1e-15);
    }

    #[test]
    fn defective_matrix_rejected() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(
            eig_decompose(&a),
            Err(Error::IllConditioned { .. })
        ));
    }

    #[test]
    fn degenerate_eigenspace_is_orthonormal() {
        // diag(2, 2, -1) rotated by a non-trivial unitary.
        let u = ComplexMatrix::from_rows(&[
            &[c(0.6, 0.0), c(0.0, 0.8), c(0.0, 0.0)],
            &[c(0.0, 0.8), c(0.6, 0.0), c(0.0, 0.0)],
            &[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        ])
        .unwrap();
        let d = ComplexMatrix::from_diagonal(&[c(2.0, 0.0), c(-1.0, 0.0), c(2.0, 0.0)]);
        let a = &(&u * &d) * &u.adjoint();
        let eig = eig_decompose(&a).unwrap();
        assert!(eig.residual(&a) < 1e-14);
        let v0 = eig.vectors.column(0);
        let v1 = eig.vectors.column(1);
        let dot: Complex64 = v0.iter().zip(&v1).map(|(a, b)| a.conj() * b).sum();
        assert!(dot.norm() < 1e-14);
    }

    #[test]
    fn non_finite_rejected() {
        let a = ComplexMatrix::from_real_rows(&[&[f64::NAN, 0.0], &[0.0, 1.0]]).unwrap();
        assert_eq!(eigenvalues(&a), Err(Error::NonFinite));
    }

    #[test]
    fn phase_fix_makes_largest_entry_real_positive() {
        let mut v = vec![c(0.1, 0.0), c(0.0, -2.0), c(1.0, 1.0)];
        fix_phase(&mut v);
        assert_eq!(v[1].im, 0.0);
        assert!(v[1].re > 0.0);
        assert!((v[1].re - 2.0).abs() < 1e-15);
    }

    #[test]
    fn random_complex_matrix_reconstructs() {
        let a = ComplexMatrix::from_fn(5, |i, j| {
            c(((i * 7 + j * 3) % 5) as f64 - 2.0, ((i + 2 * j) % 3) as f64 * 0.5)
        });
        let eig = eig_decompose(&a).unwrap();
        assert!(eig.residual(&a) < 1e-10);
        let rebuilt = eig.apply_fn(|l| l);
        assert!(rebuilt.approx_eq(&a, 1e-10));
    }
}
