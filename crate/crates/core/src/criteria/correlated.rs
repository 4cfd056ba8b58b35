use serde::{Deserialize, Serialize};

use super::CriteriaError;
use crate::linalg::{hermitian_eigen, ComplexMatrix, C64};
use crate::states::{complex_gaussian, sample_rng, BipartiteDensity};
use crate::tolerance::TolerancePolicy;

/// Random combinations tried when aligning the common singular bases.
const ALIGNMENT_TRIALS: u64 = 4;

/// Seed for the alignment combinations; fixed so the test is deterministic.
const ALIGNMENT_SEED: u64 = 0x4d43_7465_7374;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelatedOutcome {
    pub holds: bool,
    /// Largest Frobenius norm of [φ_iφ_j†, φ_kφ_l†] or [φ_i†φ_j, φ_k†φ_l].
    pub commutator_residual: f64,
    /// Largest distance of a φ_k from the span of the aligned product terms.
    pub alignment_residual: f64,
}

/// Whether ρ = Σ_ij c_ij |e_i f_i⟩⟨e_j f_j| for orthonormal {e_i}, {f_i}.
///
/// Each support eigenvector, weighted by √λ, is reshaped to a d_X×d_Y matrix
/// φ_k. ρ has that form iff all φ_k share one singular-vector pairing: the
/// families {φ_iφ_j†} and {φ_i†φ_j} then commute, and every φ_k is diagonal
/// in the singular bases of a generic combination Σ g_k φ_k.
pub fn maximally_correlated_test(
    rho: &BipartiteDensity,
    tol: &TolerancePolicy,
) -> Result<CorrelatedOutcome, CriteriaError> {
    let [dx, dy] = rho.dims;
    let eig = hermitian_eigen(&rho.matrix)?;
    let max = eig.max_eigenvalue();
    let blocks: Vec<ComplexMatrix> = (0..eig.eigenvalues.len())
        .filter(|&k| eig.eigenvalues[k] > tol.rank_relative * max)
        .map(|k| {
            let w = eig.eigenvalues[k].sqrt();
            let v = eig.eigenvector(k);
            ComplexMatrix::from_fn(dx, dy, |i, j| v[i * dy + j] * w)
        })
        .collect();

    let commutator_residual = commutator_residual(&blocks);
    let alignment_residual = (0..ALIGNMENT_TRIALS)
        .map(|trial| alignment_residual(&blocks, trial))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    Ok(CorrelatedOutcome {
        holds: commutator_residual < tol.commutator && alignment_residual < tol.commutator,
        commutator_residual,
        alignment_residual,
    })
}

fn commutator_residual(blocks: &[ComplexMatrix]) -> f64 {
    let mut left = Vec::new();
    let mut right = Vec::new();
    for a in blocks {
        for b in blocks {
            left.push(a * &b.adjoint());
            right.push(&a.adjoint() * b);
        }
    }
    let worst = |family: &[ComplexMatrix]| {
        let mut w = 0.0f64;
        for (n, x) in family.iter().enumerate() {
            for y in &family[n + 1..] {
                w = w.max((&(x * y) - &(y * x)).frobenius_norm());
            }
        }
        w
    };
    worst(&left).max(worst(&right))
}

fn alignment_residual(blocks: &[ComplexMatrix], trial: u64) -> Result<f64, CriteriaError> {
    let Some(first) = blocks.first() else {
        return Ok(0.0);
    };
    let (dx, dy) = (first.rows(), first.cols());
    let mut rng = sample_rng(ALIGNMENT_SEED, trial);
    let mut t = ComplexMatrix::zeros(dx, dy);
    for m in blocks {
        t = &t + &m.scale(complex_gaussian(&mut rng));
    }
    let left = hermitian_eigen(&(&t * &t.adjoint()))?;
    let s_max = left.max_eigenvalue().max(0.0).sqrt();
    let t_dag = t.adjoint();
    // Paired singular vectors (u_i, w_i) with w_i = T†u_i / s_i.
    let pairs: Vec<(Vec<C64>, Vec<C64>)> = (0..dx)
        .filter_map(|k| {
            let s = left.eigenvalues[k].max(0.0).sqrt();
            (s > 1e-10 * s_max).then(|| {
                let u = left.eigenvector(k);
                let w: Vec<C64> = t_dag.mul_vec(&u).expect("shape").iter().map(|z| z / s).collect();
                (u, w)
            })
        })
        .collect();
    let mut worst = 0.0f64;
    for m in blocks {
        let mut approx = ComplexMatrix::zeros(dx, dy);
        for (u, w) in &pairs {
            let mw = m.mul_vec(w).expect("shape");
            let coef: C64 = u.iter().zip(&mw).map(|(a, b)| a.conj() * b).sum();
            approx = &approx + &ComplexMatrix::from_fn(dx, dy, |i, j| coef * u[i] * w[j].conj());
        }
        worst = worst.max(m.distance(&approx));
    }
    Ok(worst)
}
