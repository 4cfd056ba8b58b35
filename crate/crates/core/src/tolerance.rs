//! The single record of numerical thresholds used by the classifier.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    /// Smallest admissible eigenvalue of a PSD test operator, relative to its trace.
    pub negativity: f64,
    /// Eigenvalues above `rank_relative · λ_max` count toward the numerical rank.
    pub rank_relative: f64,
    /// Prefix-sum slack in majorization comparisons.
    pub majorization_slack: f64,
    /// Per-entry tolerance when comparing zero-padded spectra.
    pub spectra_equal: f64,
    /// Entropy differences below this (bits) count as zero.
    pub entropy_zero: f64,
    /// Conditional entropies above −entropy_sign count as non-negative.
    pub entropy_sign: f64,
    /// Commutator and alignment residuals in the maximally-correlated test.
    pub commutator: f64,
    /// Margins within this multiple of a tolerance are boundary cases.
    pub boundary_factor: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self {
            negativity: 1e-9,
            rank_relative: 1e-8,
            majorization_slack: 1e-9,
            spectra_equal: 1e-8,
            entropy_zero: 1e-7,
            entropy_sign: 1e-9,
            commutator: 1e-8,
            boundary_factor: 10.0,
        }
    }
}

impl TolerancePolicy {
    /// Multiply every threshold (not the boundary factor) by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            negativity: self.negativity * factor,
            rank_relative: self.rank_relative * factor,
            majorization_slack: self.majorization_slack * factor,
            spectra_equal: self.spectra_equal * factor,
            entropy_zero: self.entropy_zero * factor,
            entropy_sign: self.entropy_sign * factor,
            commutator: self.commutator * factor,
            boundary_factor: self.boundary_factor,
        }
    }

    /// Whether a signed margin tested against `tol` is too close to call.
    pub fn is_boundary(&self, margin: f64, tol: f64) -> bool {
        margin.abs() <= self.boundary_factor * tol
    }
}
