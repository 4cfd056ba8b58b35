//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot entry with a diagonal
//! unitary, then applies an ordinary real Jacobi rotation to the resulting
//! real symmetric 2x2 block. Matrices in this crate are at most 64x64, where
//! Jacobi's accuracy on small eigenvalues matters more than its O(n^3) per sweep.

use super::matrix::{ComplexMatrix, C64};
use super::LinalgError;

/// Relative off-diagonal Frobenius norm at which the iteration stops.
pub const JACOBI_TOL: f64 = 1e-13;
/// Hermiticity defect accepted before symmetrization, relative to ‖M‖_F.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Sweep cap.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvalues ascending, eigenvector `k` stored as column `k`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        self.eigenvectors.column(k)
    }

    /// V diag(λ) V†.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.rows();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| v[(i, k)] * v[(j, k)].conj() * self.eigenvalues[k]).sum()
        })
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}

/// Eigendecomposition of a Hermitian matrix. The input is symmetrized as
/// (M + M†)/2 before iterating, so small Hermiticity defects are tolerated.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigen, LinalgError> {
    let n = m.ensure_square()?;
    if m.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(LinalgError::NonFinite);
    }
    let norm = m.frobenius_norm();
    if m.hermiticity_defect() > HERMITIAN_TOL * norm {
        return Err(LinalgError::NotHermitian {
            defect: m.hermiticity_defect(),
        });
    }

    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    for i in 0..n {
        a[(i, i)].im = 0.0;
    }

    let target = JACOBI_TOL * norm;
    let mut converged = n <= 1 || off_diagonal_norm(&a) <= target;
    let mut sweeps = 0;
    while !converged && sweeps < JACOBI_MAX_SWEEPS {
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
        converged = off_diagonal_norm(&a) <= target;
    }
    if !converged {
        return Err(LinalgError::NoConvergence { sweeps });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>, LinalgError> {
    hermitian_eigen(m).map(|e| e.eigenvalues)
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Annihilate a[p,q] with G = diag(1, e^{-iφ}) · R(θ); a ← G† a G, v ← v G.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let b = a[(p, q)];
    let abs_b = b.norm();
    if abs_b == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Skip rotations that cannot change the diagonal in floating point.
    if abs_b < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a[(p, q)] = C64::new(0.0, 0.0);
        a[(q, p)] = C64::new(0.0, 0.0);
        return;
    }
    let phase = b / abs_b;
    let tau = (aqq - app) / (2.0 * abs_b);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let ph_conj = phase.conj();
    let n = a.rows();

    // Columns: a ← a G.
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * ph_conj * s;
        a[(k, q)] = akp * s + akq * ph_conj * c;
    }
    // Rows: a ← G† a.
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * phase * s;
        a[(q, k)] = apk * s + aqk * phase * c;
    }
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * ph_conj * s;
        v[(k, q)] = vkp * s + vkq * ph_conj * c;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = ComplexMatrix::from_fn(n, n, |_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        (&g + &g.adjoint()).scale_real(0.5)
    }

    #[test]
    fn identity_has_unit_eigenvalues() {
        let e = hermitian_eigen(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 1.0]);
    }

    #[test]
    fn pauli_x_spectrum() {
        let x = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let e = hermitian_eigen(&x).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pauli_y_spectrum_and_vectors() {
        let y = ComplexMatrix::new(
            2,
            2,
            vec![
                C64::new(0.0, 0.0),
                C64::new(0.0, -1.0),
                C64::new(0.0, 1.0),
                C64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        let e = hermitian_eigen(&y).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!(e.reconstruct().distance(&y) < 1e-14);
    }

    #[test]
    fn random_hermitian_reconstructs() {
        for (n, seed) in [(8, 1u64), (16, 2), (32, 3), (1, 4)] {
            let m = random_hermitian(n, seed);
            let e = hermitian_eigen(&m).unwrap();
            let err = e.reconstruct().distance(&m) / m.frobenius_norm();
            assert!(err < 1e-10, "n={n} err={err}");
            let vtv = &e.eigenvectors.adjoint() * &e.eigenvectors;
            assert!(vtv.distance(&ComplexMatrix::identity(n)) < 1e-10);
            assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn deterministic_for_identical_input() {
        let m = random_hermitian(6, 9);
        let a = hermitian_eigen(&m).unwrap();
        let b = hermitian_eigen(&m).unwrap();
        assert_eq!(a.eigenvalues, b.eigenvalues);
        assert_eq!(a.eigenvectors, b.eigenvectors);
    }

    #[test]
    fn rejects_non_square_and_non_hermitian() {
        let m = ComplexMatrix::zeros(2, 3);
        assert!(matches!(hermitian_eigen(&m), Err(LinalgError::NotSquare { .. })));
        let m = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(hermitian_eigen(&m), Err(LinalgError::NotHermitian { .. })));
    }

    #[test]
    fn zero_matrix() {
        let e = hermitian_eigen(&ComplexMatrix::zeros(3, 3)).unwrap();
        assert_eq!(e.eigenvalues, vec![0.0; 3]);
    }
}
