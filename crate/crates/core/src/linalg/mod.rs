//! Dense complex linear algebra for small density operators.

mod eigen;
mod matrix;
mod ops;
mod schmidt;
mod spectrum;

pub use eigen::{hermitian_eigen, hermitian_eigenvalues, HermitianEigen, HERMITIAN_TOL, JACOBI_MAX_SWEEPS, JACOBI_TOL};
pub use matrix::{ComplexMatrix, C64};
pub use ops::{kron, numerical_rank, partial_trace, partial_transpose, rank_of_spectrum, solve, Subsystem};
pub use schmidt::{schmidt_decompose, SchmidtDecomposition, SCHMIDT_CUTOFF};
pub use spectrum::{
    majorization_compare, von_neumann_entropy, Majorization, MajorizationOutcome, Spectrum, ENTROPY_CLAMP,
    NEGATIVITY_TOL, NORMALIZATION_TOL,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix must have at least one row and column")]
    EmptyMatrix,
    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("non-finite entry")]
    NonFinite,
    #[error("matrix is not Hermitian (defect {defect:e})")]
    NotHermitian { defect: f64 },
    #[error("local dimensions {dims:?} do not factor a space of size {size}")]
    DimensionMismatch { dims: Vec<usize>, size: usize },
    #[error("negative eigenvalue {value:e} in a would-be density operator")]
    NegativeEigenvalue { value: f64 },
    #[error("probabilities sum to {sum}, not 1")]
    NotNormalized { sum: f64 },
    #[error("zero vector")]
    ZeroVector,
    #[error("singular matrix")]
    Singular,
    #[error("Jacobi iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
}
