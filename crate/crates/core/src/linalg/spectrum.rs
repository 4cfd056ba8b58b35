use serde::{Deserialize, Serialize};

use super::eigen::hermitian_eigenvalues;
use super::matrix::ComplexMatrix;
use super::LinalgError;

/// Eigenvalues below this are treated as exact zeros in entropies.
pub const ENTROPY_CLAMP: f64 = 1e-12;
/// Most negative eigenvalue (relative to the trace) a density may carry.
pub const NEGATIVITY_TOL: f64 = 1e-9;
/// Accepted deviation of a probability vector's sum from 1.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Probability vector sorted in non-increasing order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum(Vec<f64>);

impl Spectrum {
    pub fn new(mut values: Vec<f64>) -> Result<Self, LinalgError> {
        if values.iter().any(|x| !x.is_finite()) {
            return Err(LinalgError::NonFinite);
        }
        if let Some(&min) = values.iter().min_by(|a, b| a.total_cmp(b)) {
            if min < -NEGATIVITY_TOL {
                return Err(LinalgError::NegativeEigenvalue { value: min });
            }
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(LinalgError::NotNormalized { sum });
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Self(values))
    }

    /// Eigenvalues of a unit-trace Hermitian PSD operator.
    pub fn of_density(rho: &ComplexMatrix) -> Result<Self, LinalgError> {
        Self::new(hermitian_eigenvalues(rho)?)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Values padded with zeros to `len` entries.
    pub fn padded(&self, len: usize) -> Vec<f64> {
        let mut v = self.0.clone();
        v.resize(len.max(v.len()), 0.0);
        v
    }

    /// Shannon entropy in bits with small values clamped to zero.
    pub fn entropy_bits(&self) -> f64 {
        shannon_bits(&self.0)
    }
}

fn shannon_bits(values: &[f64]) -> f64 {
    values
        .iter()
        .filter(|&&x| x > ENTROPY_CLAMP)
        .map(|&x| -x * x.log2())
        .sum::<f64>()
        + 0.0
}

/// −Tr ρ log₂ ρ.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64, LinalgError> {
    let ev = hermitian_eigenvalues(rho)?;
    let trace: f64 = ev.iter().sum();
    if let Some(&min) = ev.first() {
        if min < -NEGATIVITY_TOL * trace.abs().max(1.0) {
            return Err(LinalgError::NegativeEigenvalue { value: min });
        }
    }
    Ok(shannon_bits(&ev))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Majorization {
    LeftMajorizes,
    RightMajorizes,
    Equal,
    Incomparable,
}

impl Majorization {
    /// Left ≻ right, counting equality.
    pub fn left_dominates(self) -> bool {
        matches!(self, Majorization::LeftMajorizes | Majorization::Equal)
    }

    pub fn flip(self) -> Self {
        match self {
            Majorization::LeftMajorizes => Majorization::RightMajorizes,
            Majorization::RightMajorizes => Majorization::LeftMajorizes,
            other => other,
        }
    }
}

/// Relation together with the worst prefix-sum gap in each direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MajorizationOutcome {
    pub relation: Majorization,
    /// min over k of (Σ_{i≤k} p_i − Σ_{i≤k} q_i); ≥ −slack iff p ≻ q.
    pub left_margin: f64,
    /// min over k of (Σ_{i≤k} q_i − Σ_{i≤k} p_i).
    pub right_margin: f64,
}

/// Compare two spectra under majorization; the shorter one is zero-padded.
pub fn majorization_compare(p: &Spectrum, q: &Spectrum, slack: f64) -> MajorizationOutcome {
    let len = p.len().max(q.len());
    let (pp, qq) = (p.padded(len), q.padded(len));
    let mut sp = 0.0;
    let mut sq = 0.0;
    let mut left_margin = f64::INFINITY;
    let mut right_margin = f64::INFINITY;
    // The last prefix is 1 − 1 for both and carries no information.
    for k in 0..len.saturating_sub(1) {
        sp += pp[k];
        sq += qq[k];
        left_margin = left_margin.min(sp - sq);
        right_margin = right_margin.min(sq - sp);
    }
    if len <= 1 {
        left_margin = 0.0;
        right_margin = 0.0;
    }
    let left = left_margin >= -slack;
    let right = right_margin >= -slack;
    let relation = match (left, right) {
        (true, true) => Majorization::Equal,
        (true, false) => Majorization::LeftMajorizes,
        (false, true) => Majorization::RightMajorizes,
        (false, false) => Majorization::Incomparable,
    };
    MajorizationOutcome {
        relation,
        left_margin,
        right_margin,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::kron;

    fn spec(v: &[f64]) -> Spectrum {
        Spectrum::new(v.to_vec()).unwrap()
    }

    #[test]
    fn entropy_reference_values() {
        let pure = ComplexMatrix::diagonal(&[1.0, 0.0, 0.0]);
        assert_eq!(von_neumann_entropy(&pure).unwrap(), 0.0);
        let mixed = ComplexMatrix::identity(4).scale_real(0.25);
        assert!((von_neumann_entropy(&mixed).unwrap() - 2.0).abs() < 1e-10);
        // −(3/4)log₂(3/4) − (1/4)log₂(1/4)
        let expected = -(0.75f64 * 0.75f64.log2()) - 0.25 * 0.25f64.log2();
        let h = von_neumann_entropy(&ComplexMatrix::diagonal(&[0.75, 0.25])).unwrap();
        assert!((h - expected).abs() < 1e-14);
        assert!((h - 0.81128).abs() < 1e-5);
    }

    #[test]
    fn entropy_rejects_negative_operators() {
        let bad = ComplexMatrix::diagonal(&[1.1, -0.1]);
        assert!(matches!(
            von_neumann_entropy(&bad),
            Err(LinalgError::NegativeEigenvalue { .. })
        ));
    }

    #[test]
    fn entropy_is_additive_on_products() {
        let a = ComplexMatrix::diagonal(&[0.6, 0.3, 0.1]);
        let b = ComplexMatrix::from_real(2, 2, &[0.5, 0.2, 0.2, 0.5]).unwrap();
        let joint = von_neumann_entropy(&kron(&a, &b)).unwrap();
        let sum = von_neumann_entropy(&a).unwrap() + von_neumann_entropy(&b).unwrap();
        assert!((joint - sum).abs() < 1e-9);
    }

    #[test]
    fn majorization_examples() {
        let tol = 1e-9;
        assert_eq!(
            majorization_compare(&spec(&[1.0, 0.0]), &spec(&[0.5, 0.5]), tol).relation,
            Majorization::LeftMajorizes
        );
        let p = spec(&[0.5, 0.3, 0.2]);
        assert_eq!(majorization_compare(&p, &p, tol).relation, Majorization::Equal);
        // prefix sums 0.5 > 0.4 but 0.75 < 0.8
        let out = majorization_compare(&spec(&[0.5, 0.25, 0.25]), &spec(&[0.4, 0.4, 0.2]), tol);
        assert_eq!(out.relation, Majorization::Incomparable);
        assert!((out.left_margin + 0.05).abs() < 1e-12);
        assert!((out.right_margin + 0.1).abs() < 1e-12);
    }

    #[test]
    fn majorization_pads_shorter_list() {
        let out = majorization_compare(&spec(&[0.5, 0.5]), &spec(&[0.25; 4]), 1e-9);
        assert_eq!(out.relation, Majorization::LeftMajorizes);
    }

    #[test]
    fn spectrum_rejects_unnormalized() {
        assert!(matches!(
            Spectrum::new(vec![0.5, 0.4]),
            Err(LinalgError::NotNormalized { .. })
        ));
    }
}
