//! Tripartite pure states, their constructors, and their two-party reductions.
//!
//! Amplitudes of a state on C^{d_A} ⊗ C^{d_B} ⊗ C^{d_C} are stored flat with
//! 0-based index `i·d_B·d_C + j·d_C + k`. Documentation and file parameters use
//! 1-based basis labels (|1⟩, |2⟩, …); [`PureState3::index`] is the only place
//! that turns a basis triple into a storage offset.

mod families;
mod product;
mod random;

pub use families::{
    basis, ghz, mc_state, psi_a, rnn_boundary, rrr_symmetric, rrr_symmetric_waring_terms, schmidt_family, tiles_pnn,
    w_state, ProductTerm,
};
pub use product::{direct_sum_product, permute_parties, slocc_filter, DEFAULT_WEIGHT};
pub use random::{
    complex_gaussian, haar_random, purify_separable_bc, purify_separable_bc_with, random_filter, random_unit_vector,
    random_unitary, sample_rng, BcTermBasis, SampleRng, PRNG_ALGORITHM,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{hermitian_eigenvalues, partial_trace, ComplexMatrix, LinalgError, Subsystem, C64};

/// Norm deviation tolerated by [`PureState3::new`].
pub const NORM_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("state norm {norm} deviates from 1")]
    NotNormalized { norm: f64 },
    #[error("state vector is zero")]
    ZeroVector,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("filter on party {party} is singular (condition ratio {ratio:e})")]
    SingularFilter { party: Party, ratio: f64 },
    #[error("operator is not a valid density: {0}")]
    InvalidDensity(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Party {
    A,
    B,
    C,
}

impl Party {
    pub const ALL: [Party; 3] = [Party::A, Party::B, Party::C];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Party {
        Party::ALL[i]
    }
}

impl std::fmt::Display for Party {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self)
    }
}

/// An ordered pair of parties; the classification triple is (AB, BC, CA).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pair {
    AB,
    BC,
    CA,
}

impl Pair {
    pub const ALL: [Pair; 3] = [Pair::AB, Pair::BC, Pair::CA];

    pub fn parties(self) -> (Party, Party) {
        match self {
            Pair::AB => (Party::A, Party::B),
            Pair::BC => (Party::B, Party::C),
            Pair::CA => (Party::C, Party::A),
        }
    }

    /// The party traced out to obtain this reduction.
    pub fn complement(self) -> Party {
        match self {
            Pair::AB => Party::C,
            Pair::BC => Party::A,
            Pair::CA => Party::B,
        }
    }

    /// Slot of this pair in a class triple.
    pub fn slot(self) -> usize {
        self as usize
    }

    /// The pair made of two distinct parties, in either order.
    pub fn of(p: Party, q: Party) -> Pair {
        match (p.min(q), p.max(q)) {
            (Party::A, Party::B) => Pair::AB,
            (Party::B, Party::C) => Pair::BC,
            (Party::A, Party::C) => Pair::CA,
            _ => panic!("a pair needs two distinct parties"),
        }
    }

    /// The other two pairs, i.e. the reductions sharing one party with this one.
    pub fn siblings(self) -> [Pair; 2] {
        match self {
            Pair::AB => [Pair::BC, Pair::CA],
            Pair::BC => [Pair::CA, Pair::AB],
            Pair::CA => [Pair::AB, Pair::BC],
        }
    }

    /// The party this pair shares with `other`.
    pub fn shared_party(self, other: Pair) -> Option<Party> {
        let (a, b) = self.parties();
        let (c, d) = other.parties();
        [a, b].into_iter().find(|p| (*p == c || *p == d) && self != other)
    }
}

impl std::fmt::Display for Pair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self)
    }
}

/// Tensor rank known from how a state was built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnownRank {
    pub value: usize,
    /// `false` when `value` is only an upper bound (number of product terms).
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub family: String,
    #[serde(default)]
    pub parameters: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tensor_rank: Option<KnownRank>,
    /// Reductions known to be separable from an explicit product decomposition.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub separable_pairs: Vec<Pair>,
}

impl Provenance {
    pub fn new(family: impl Into<String>, parameters: serde_json::Value) -> Self {
        Self {
            family: family.into(),
            parameters,
            tensor_rank: None,
            separable_pairs: Vec::new(),
        }
    }

    pub fn with_rank(mut self, value: usize, exact: bool) -> Self {
        self.tensor_rank = Some(KnownRank { value, exact });
        self
    }

    pub fn with_separable(mut self, pairs: impl IntoIterator<Item = Pair>) -> Self {
        self.separable_pairs = pairs.into_iter().collect();
        self.separable_pairs.sort();
        self.separable_pairs.dedup();
        self
    }

    pub fn certifies_separable(&self, pair: Pair) -> bool {
        self.separable_pairs.contains(&pair)
    }
}

/// Normalized vector in C^{d_A} ⊗ C^{d_B} ⊗ C^{d_C}.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState3 {
    dims: [usize; 3],
    amps: Vec<C64>,
    provenance: Option<Provenance>,
}

impl PureState3 {
    /// Wrap amplitudes that are already normalized within [`NORM_TOL`].
    pub fn new(dims: [usize; 3], amps: Vec<C64>) -> Result<Self, StateError> {
        Self::check_shape(dims, &amps)?;
        let norm = l2_norm(&amps);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(StateError::NotNormalized { norm });
        }
        Ok(Self {
            dims,
            amps,
            provenance: None,
        })
    }

    /// Normalize arbitrary nonzero amplitudes.
    pub fn from_unnormalized(dims: [usize; 3], amps: Vec<C64>) -> Result<Self, StateError> {
        Self::check_shape(dims, &amps)?;
        let norm = l2_norm(&amps);
        if norm == 0.0 || !norm.is_finite() {
            return Err(StateError::ZeroVector);
        }
        Ok(Self {
            dims,
            amps: amps.into_iter().map(|z| z / norm).collect(),
            provenance: None,
        })
    }

    fn check_shape(dims: [usize; 3], amps: &[C64]) -> Result<(), StateError> {
        if dims.contains(&0) {
            return Err(StateError::InvalidDimension(format!("{dims:?}")));
        }
        if amps.len() != dims.iter().product::<usize>() {
            return Err(StateError::InvalidDimension(format!(
                "{} amplitudes for dims {dims:?}",
                amps.len()
            )));
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(StateError::Linalg(LinalgError::NonFinite));
        }
        Ok(())
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = Some(provenance);
        self
    }

    pub fn clear_provenance(mut self) -> Self {
        self.provenance = None;
        self
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn dim(&self, party: Party) -> usize {
        self.dims[party.index()]
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    /// Storage offset of the 0-based basis triple (i, j, k).
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        let [_, db, dc] = self.dims;
        i * db * dc + j * dc + k
    }

    pub fn amp(&self, i: usize, j: usize, k: usize) -> C64 {
        self.amps[self.index(i, j, k)]
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.amps)
    }

    /// Two-party reduction, obtained by tracing out the complementary party.
    pub fn reduced_density(&self, pair: Pair) -> BipartiteDensity {
        let [da, db, dc] = self.dims;
        let (matrix, dims) = match pair {
            // ρ_AB = M M† with M the (d_A d_B) × d_C reshape.
            Pair::AB => {
                let m = ComplexMatrix::new(da * db, dc, self.amps.clone()).expect("shape checked");
                (&m * &m.adjoint(), [da, db])
            }
            // ρ_BC[(j,k),(j',k')] = Σ_i ψ_ijk ψ*_ij'k'
            Pair::BC => {
                let m = ComplexMatrix::new(da, db * dc, self.amps.clone()).expect("shape checked");
                (&m.transpose() * &m.conj(), [db, dc])
            }
            // ρ_CA[(k,i),(k',i')] = Σ_j ψ_ijk ψ*_i'jk'
            Pair::CA => {
                let n = dc * da;
                let mut rho = ComplexMatrix::zeros(n, n);
                for k in 0..dc {
                    for i in 0..da {
                        for k2 in 0..dc {
                            for i2 in 0..da {
                                let s: C64 = (0..db).map(|j| self.amp(i, j, k) * self.amp(i2, j, k2).conj()).sum();
                                rho[(k * da + i, k2 * da + i2)] = s;
                            }
                        }
                    }
                }
                (rho, [dc, da])
            }
        };
        BipartiteDensity {
            pair,
            dims,
            matrix: matrix.hermitian_part(),
        }
    }

    /// Single-party reduction.
    pub fn marginal(&self, party: Party) -> ComplexMatrix {
        let [da, db, dc] = self.dims;
        match party {
            Party::A => {
                let m = ComplexMatrix::new(da, db * dc, self.amps.clone()).expect("shape checked");
                (&m * &m.adjoint()).hermitian_part()
            }
            Party::B => {
                let ab = self.reduced_density(Pair::AB);
                partial_trace(&ab.matrix, [da, db], Subsystem::First).expect("dims consistent")
            }
            Party::C => {
                let m = ComplexMatrix::new(da * db, dc, self.amps.clone()).expect("shape checked");
                (&m.transpose() * &m.conj()).hermitian_part()
            }
        }
    }

    /// Numerical ranks (d_A, d_B, d_C) of the single-party reductions.
    pub fn local_ranks(&self, rank_relative: f64) -> [usize; 3] {
        Party::ALL.map(|p| {
            let ev = hermitian_eigenvalues(&self.marginal(p)).expect("marginal is Hermitian");
            crate::linalg::rank_of_spectrum(&ev, rank_relative)
        })
    }
}

fn l2_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Unit-trace PSD operator on C^{d_X} ⊗ C^{d_Y} for the pair (X, Y).
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteDensity {
    pub pair: Pair,
    pub dims: [usize; 2],
    pub matrix: ComplexMatrix,
}

impl BipartiteDensity {
    /// Validating constructor: Hermitian and unit trace within 1e-10,
    /// eigenvalues ≥ −1e-9.
    pub fn new(matrix: ComplexMatrix, dims: [usize; 2], pair: Pair) -> Result<Self, StateError> {
        let n = matrix.rows();
        if !matrix.is_square() || dims[0] * dims[1] != n {
            return Err(StateError::InvalidDimension(format!(
                "{}x{} operator for local dims {dims:?}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let defect = matrix.hermiticity_defect();
        if defect > 1e-10 {
            return Err(StateError::InvalidDensity(format!("Hermiticity defect {defect:e}")));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > 1e-10 || trace.im.abs() > 1e-10 {
            return Err(StateError::InvalidDensity(format!("trace {trace}")));
        }
        let ev = hermitian_eigenvalues(&matrix)?;
        if ev[0] < -1e-9 {
            return Err(StateError::InvalidDensity(format!("eigenvalue {:e}", ev[0])));
        }
        Ok(Self {
            pair,
            dims,
            matrix: matrix.hermitian_part(),
        })
    }

    /// Reduction onto the first (`Subsystem::First`) or second party.
    pub fn marginal(&self, keep: Subsystem) -> ComplexMatrix {
        let traced = match keep {
            Subsystem::First => Subsystem::Second,
            Subsystem::Second => Subsystem::First,
        };
        partial_trace(&self.matrix, self.dims, traced)
            .expect("dims validated")
            .hermitian_part()
    }

    pub fn size(&self) -> usize {
        self.dims[0] * self.dims[1]
    }
}
