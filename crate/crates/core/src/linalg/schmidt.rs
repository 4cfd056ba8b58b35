use super::eigen::hermitian_eigen;
use super::matrix::{ComplexMatrix, C64};
use super::LinalgError;

/// Coefficients below this are dropped from the decomposition.
pub const SCHMIDT_CUTOFF: f64 = 1e-13;

/// |v⟩ = Σ_k s_k |u_k⟩ ⊗ |w_k⟩ with s descending.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    pub coefficients: Vec<f64>,
    pub left: Vec<Vec<C64>>,
    pub right: Vec<Vec<C64>>,
}

impl SchmidtDecomposition {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    pub fn reconstruct(&self) -> Vec<C64> {
        let d1 = self.left.first().map_or(0, Vec::len);
        let d2 = self.right.first().map_or(0, Vec::len);
        let mut out = vec![C64::new(0.0, 0.0); d1 * d2];
        for ((s, u), w) in self.coefficients.iter().zip(&self.left).zip(&self.right) {
            for i in 0..d1 {
                for j in 0..d2 {
                    out[i * d2 + j] += u[i] * w[j] * *s;
                }
            }
        }
        out
    }
}

/// Schmidt decomposition of a vector on C^{d1} ⊗ C^{d2} (index i·d2 + j).
///
/// Left vectors are eigenvectors of M M† for the reshaped d1×d2 matrix M;
/// each right vector is (M^T ū_k)/s_k, with s_k = ‖M^T ū_k‖ computed directly
/// rather than as the square root of an eigenvalue.
pub fn schmidt_decompose(v: &[C64], dims: [usize; 2]) -> Result<SchmidtDecomposition, LinalgError> {
    let [d1, d2] = dims;
    if d1 == 0 || d2 == 0 || d1 * d2 != v.len() {
        return Err(LinalgError::DimensionMismatch {
            dims: dims.to_vec(),
            size: v.len(),
        });
    }
    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(LinalgError::ZeroVector);
    }
    let m = ComplexMatrix::new(d1, d2, v.to_vec())?;
    let gram = &m * &m.adjoint();
    let eig = hermitian_eigen(&gram)?;

    let mut terms: Vec<(f64, Vec<C64>, Vec<C64>)> = Vec::new();
    for k in (0..d1).rev() {
        let u = eig.eigenvector(k);
        // w_j = Σ_i conj(u_i) M[i, j]
        let w: Vec<C64> = (0..d2)
            .map(|j| (0..d1).map(|i| u[i].conj() * m[(i, j)]).sum())
            .collect();
        let s = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if s > SCHMIDT_CUTOFF * norm {
            terms.push((s, u, w.into_iter().map(|z| z / s).collect()));
        }
    }
    terms.sort_by(|a, b| b.0.total_cmp(&a.0));
    let (coefficients, (left, right)) = terms.into_iter().map(|(s, u, w)| (s, (u, w))).unzip();
    Ok(SchmidtDecomposition {
        coefficients,
        left,
        right,
    })
}
