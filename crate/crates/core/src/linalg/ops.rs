use super::eigen::hermitian_eigenvalues;
use super::matrix::{ComplexMatrix, C64};
use super::LinalgError;

/// Which factor of a two-party space an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    First,
    Second,
}

/// Kronecker product: `kron(a, b)[(i·m + k, j·n + l)] = a[i,j]·b[k,l]`
/// with `b` of shape m×n.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (m, n) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(a.rows() * m, a.cols() * n, |r, c| a[(r / m, c / n)] * b[(r % m, c % n)])
}

fn check_dims(rho: &ComplexMatrix, dims: [usize; 2]) -> Result<(), LinalgError> {
    let n = rho.ensure_square()?;
    if dims[0] == 0 || dims[1] == 0 || dims[0] * dims[1] != n {
        return Err(LinalgError::DimensionMismatch {
            dims: dims.to_vec(),
            size: n,
        });
    }
    Ok(())
}

/// Trace out `traced` from an operator on C^{d1} ⊗ C^{d2}.
pub fn partial_trace(rho: &ComplexMatrix, dims: [usize; 2], traced: Subsystem) -> Result<ComplexMatrix, LinalgError> {
    check_dims(rho, dims)?;
    let [d1, d2] = dims;
    Ok(match traced {
        Subsystem::Second => {
            ComplexMatrix::from_fn(d1, d1, |i, j| (0..d2).map(|k| rho[(i * d2 + k, j * d2 + k)]).sum())
        }
        Subsystem::First => ComplexMatrix::from_fn(d2, d2, |k, l| (0..d1).map(|i| rho[(i * d2 + k, i * d2 + l)]).sum()),
    })
}

/// Partial transpose on `party`; for the second factor
/// `(ρ^{T₂})[(i,k),(j,l)] = ρ[(i,l),(j,k)]`. An exact involution.
pub fn partial_transpose(
    rho: &ComplexMatrix,
    dims: [usize; 2],
    party: Subsystem,
) -> Result<ComplexMatrix, LinalgError> {
    check_dims(rho, dims)?;
    let [_, d2] = dims;
    Ok(ComplexMatrix::from_fn(rho.rows(), rho.cols(), |r, c| {
        let (i, k) = (r / d2, r % d2);
        let (j, l) = (c / d2, c % d2);
        match party {
            Subsystem::Second => rho[(i * d2 + l, j * d2 + k)],
            Subsystem::First => rho[(j * d2 + k, i * d2 + l)],
        }
    }))
}

/// Number of eigenvalues strictly above `rel_tol · λ_max`.
pub fn numerical_rank(rho: &ComplexMatrix, rel_tol: f64) -> Result<usize, LinalgError> {
    let ev = hermitian_eigenvalues(rho)?;
    Ok(rank_of_spectrum(&ev, rel_tol))
}

pub fn rank_of_spectrum(eigenvalues: &[f64], rel_tol: f64) -> usize {
    let max = eigenvalues.iter().copied().fold(0.0f64, f64::max);
    if max <= 0.0 {
        return 0;
    }
    eigenvalues.iter().filter(|&&x| x > rel_tol * max).count()
}

/// Solve `a · x = b` for square `a` by Gaussian elimination with partial pivoting.
pub fn solve(a: &ComplexMatrix, b: &[C64]) -> Result<Vec<C64>, LinalgError> {
    let n = a.ensure_square()?;
    if b.len() != n {
        return Err(LinalgError::ShapeMismatch {
            expected: n,
            found: b.len(),
        });
    }
    let mut m = a.clone();
    let mut x = b.to_vec();
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[(i, col)].norm().total_cmp(&m[(j, col)].norm()))
            .unwrap_or(col);
        if m[(pivot, col)].norm() <= 1e-14 * scale {
            return Err(LinalgError::Singular);
        }
        if pivot != col {
            for k in 0..n {
                let tmp = m[(col, k)];
                m[(col, k)] = m[(pivot, k)];
                m[(pivot, k)] = tmp;
            }
            x.swap(col, pivot);
        }
        let inv = m[(col, col)].inv();
        for row in col + 1..n {
            let f = m[(row, col)] * inv;
            if f.norm_sqr() == 0.0 {
                continue;
            }
            for k in col..n {
                let v = m[(col, k)];
                m[(row, k)] -= f * v;
            }
            let xc = x[col];
            x[row] -= f * xc;
        }
    }
    for row in (0..n).rev() {
        let s: C64 = (row + 1..n).map(|k| m[(row, k)] * x[k]).sum();
        x[row] = (x[row] - s) / m[(row, row)];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eigen;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn bell_projector() -> ComplexMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        ComplexMatrix::outer(&[c(s), c(0.0), c(0.0), c(s)])
    }

    #[test]
    fn kron_identities_and_diagonals() {
        let k = kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(3));
        assert_eq!(k, ComplexMatrix::identity(6));
        let k = kron(
            &ComplexMatrix::diagonal(&[1.0, 2.0]),
            &ComplexMatrix::diagonal(&[3.0, 4.0]),
        );
        assert_eq!(k, ComplexMatrix::diagonal(&[3.0, 4.0, 6.0, 8.0]));
    }

    #[test]
    fn kron_matches_index_formula() {
        let a = ComplexMatrix::from_fn(2, 2, |i, j| C64::new(0.3 * i as f64 - 0.7, 1.1 * j as f64));
        let b = ComplexMatrix::from_fn(2, 2, |i, j| C64::new((i + 2 * j) as f64, -0.5));
        let k = kron(&a, &b);
        for i in 0..2 {
            for j in 0..2 {
                for p in 0..2 {
                    for q in 0..2 {
                        assert_eq!(k[(i * 2 + p, j * 2 + q)], a[(i, j)] * b[(p, q)]);
                    }
                }
            }
        }
    }

    #[test]
    fn partial_trace_of_product_factorizes() {
        let rho = ComplexMatrix::from_real(2, 2, &[0.7, 0.1, 0.1, 0.3]).unwrap();
        let sigma = ComplexMatrix::diagonal(&[0.2, 0.5, 0.3]);
        let joint = kron(&rho, &sigma);
        let a = partial_trace(&joint, [2, 3], Subsystem::Second).unwrap();
        let b = partial_trace(&joint, [2, 3], Subsystem::First).unwrap();
        assert!(a.distance(&rho) < 1e-12);
        assert!(b.distance(&sigma) < 1e-12);
    }

    #[test]
    fn partial_trace_rejects_bad_dims() {
        let m = ComplexMatrix::identity(4);
        assert!(matches!(
            partial_trace(&m, [2, 3], Subsystem::First),
            Err(LinalgError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn partial_transpose_of_bell_has_negative_half() {
        let pt = partial_transpose(&bell_projector(), [2, 2], Subsystem::Second).unwrap();
        let e = hermitian_eigen(&pt).unwrap();
        assert!((e.eigenvalues[0] + 0.5).abs() < 1e-14);
    }

    #[test]
    fn partial_transpose_leaves_diagonal_states_alone() {
        let d = ComplexMatrix::diagonal(&[0.1, 0.2, 0.3, 0.4]);
        assert_eq!(partial_transpose(&d, [2, 2], Subsystem::Second).unwrap(), d);
    }

    #[test]
    fn partial_transpose_is_an_involution() {
        let m = ComplexMatrix::from_fn(6, 6, |i, j| C64::new(i as f64 * 0.1, j as f64 - 2.0));
        for party in [Subsystem::First, Subsystem::Second] {
            let twice = partial_transpose(&partial_transpose(&m, [2, 3], party).unwrap(), [2, 3], party).unwrap();
            assert_eq!(twice, m);
        }
    }

    #[test]
    fn rank_counts() {
        assert_eq!(
            numerical_rank(&ComplexMatrix::identity(5).scale_real(0.2), 1e-8).unwrap(),
            5
        );
        let p = ComplexMatrix::diagonal(&[1.0, 1.0, 1.0, 0.0]);
        assert_eq!(numerical_rank(&p, 1e-8).unwrap(), 3);
        assert_eq!(numerical_rank(&ComplexMatrix::zeros(2, 2), 1e-8).unwrap(), 0);
    }

    #[test]
    fn solve_small_system() {
        let a = ComplexMatrix::new(2, 2, vec![C64::new(0.0, 1.0), c(2.0), c(1.0), C64::new(1.0, -1.0)]).unwrap();
        let x = vec![C64::new(1.0, 2.0), C64::new(-0.5, 0.25)];
        let b = a.mul_vec(&x).unwrap();
        let got = solve(&a, &b).unwrap();
        for (g, e) in got.iter().zip(&x) {
            assert!((g - e).norm() < 1e-14);
        }
        assert!(matches!(
            solve(&ComplexMatrix::zeros(2, 2), &b),
            Err(LinalgError::Singular)
        ));
    }
}
