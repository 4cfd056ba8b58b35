//! Entanglement criteria on a bipartite density operator ρ on C^{d_X} ⊗ C^{d_Y}.
//!
//! Every check returns its boolean together with the numeric margin it was
//! decided on, so callers can tell a clear result from a boundary case.

mod audit;
mod correlated;

pub use audit::{hierarchy_audit, Implication, Violation};
pub use correlated::{maximally_correlated_test, CorrelatedOutcome};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{
    hermitian_eigenvalues, kron, majorization_compare, partial_transpose, ComplexMatrix, LinalgError,
    MajorizationOutcome, Spectrum, Subsystem,
};
use crate::states::{BipartiteDensity, Pair};
use crate::tolerance::TolerancePolicy;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CriteriaError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// ρ^{T_Y} ⪰ 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PptCheck {
    pub holds: bool,
    /// Smallest eigenvalue of the partial transpose.
    pub min_eigenvalue: f64,
}

/// ρ_X ⊗ I − ρ ⪰ 0 and I ⊗ ρ_Y − ρ ⪰ 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReductionCheck {
    pub holds: bool,
    /// Smallest eigenvalue of ρ_X ⊗ I − ρ.
    pub first_margin: f64,
    /// Smallest eigenvalue of I ⊗ ρ_Y − ρ.
    pub second_margin: f64,
}

impl ReductionCheck {
    pub fn margin(&self) -> f64 {
        self.first_margin.min(self.second_margin)
    }
}

/// spec(ρ_X) against spec(ρ), and spec(ρ_Y) against spec(ρ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MajorizationCheck {
    pub first: MajorizationOutcome,
    pub second: MajorizationOutcome,
}

impl MajorizationCheck {
    pub fn holds(&self) -> bool {
        self.holds_on(Subsystem::First) && self.holds_on(Subsystem::Second)
    }

    pub fn holds_on(&self, side: Subsystem) -> bool {
        self.side(side).relation.left_dominates()
    }

    /// Worst prefix-sum gap in the direction the criterion requires.
    pub fn margin(&self) -> f64 {
        self.first.left_margin.min(self.second.left_margin)
    }

    fn side(&self, side: Subsystem) -> &MajorizationOutcome {
        match side {
            Subsystem::First => &self.first,
            Subsystem::Second => &self.second,
        }
    }
}

/// Conditional entropies in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CondEntropy {
    /// H(Y|X) = H(ρ) − H(ρ_X).
    pub given_first: f64,
    /// H(X|Y) = H(ρ) − H(ρ_Y).
    pub given_second: f64,
}

impl CondEntropy {
    pub fn min(&self) -> f64 {
        self.given_first.min(self.given_second)
    }

    pub fn on(&self, side: Subsystem) -> f64 {
        match side {
            Subsystem::First => self.given_first,
            Subsystem::Second => self.given_second,
        }
    }
}

/// A per-side equality test with the deviation it was decided on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SidedEquality {
    pub first: bool,
    pub second: bool,
    pub first_deviation: f64,
    pub second_deviation: f64,
}

impl SidedEquality {
    pub fn on(&self, side: Subsystem) -> bool {
        match side {
            Subsystem::First => self.first,
            Subsystem::Second => self.second,
        }
    }

    pub fn both(&self) -> bool {
        self.first && self.second
    }
}

/// Numerical ranks used by the low-rank separability rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankData {
    pub rank: usize,
    pub local_ranks: [usize; 2],
    /// Some eigenvalue sits within the boundary factor of the rank cut, so
    /// the counts above are not trusted for a verdict.
    pub near_cut: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeparableRule {
    /// PPT with rank ρ ≤ max(rank ρ_X, rank ρ_Y).
    RankRule,
    /// PPT with a PPT sibling reduction of the same pure state.
    SiblingPpt,
    /// The constructor certified a separable decomposition.
    Provenance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntanglementWitness {
    Npt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Separable(SeparableRule),
    Entangled(EntanglementWitness),
    Undecided,
}

impl Verdict {
    pub fn is_separable(self) -> bool {
        matches!(self, Verdict::Separable(_))
    }

    pub fn is_decided(self) -> bool {
        !matches!(self, Verdict::Undecided)
    }
}

/// Outside knowledge available to the separability ladder.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparabilityContext {
    /// One of the two other reductions of the same pure state is PPT.
    pub sibling_ppt: bool,
    /// The state's constructor certifies this reduction separable.
    pub certified_separable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriteriaReport {
    pub pair: Pair,
    pub dims: [usize; 2],
    pub ppt: PptCheck,
    pub reduction: ReductionCheck,
    pub majorization: MajorizationCheck,
    pub cond_entropy: CondEntropy,
    /// Zero-padded spectra of ρ_X (first) and ρ_Y (second) against that of ρ.
    pub spectra_equal: SidedEquality,
    /// H(ρ_X) = H(ρ) (first) and H(ρ_Y) = H(ρ) (second).
    pub entropy_equal: SidedEquality,
    pub ranks: RankData,
    pub separability: Verdict,
}

impl CriteriaReport {
    pub fn cond_entropy_nonnegative(&self, tol: &TolerancePolicy) -> bool {
        self.cond_entropy.min() >= -tol.entropy_sign
    }
}

fn sorted_spectrum(m: &ComplexMatrix) -> Result<Vec<f64>, CriteriaError> {
    Ok(hermitian_eigenvalues(&m.hermitian_part())?)
}

fn clamp_spectrum(ev: &[f64]) -> Spectrum {
    let clamped: Vec<f64> = ev.iter().map(|x| x.max(0.0)).collect();
    let sum: f64 = clamped.iter().sum();
    Spectrum::new(clamped.into_iter().map(|x| x / sum).collect()).expect("clamped density spectrum")
}

fn entropy_bits(spectrum: &Spectrum) -> f64 {
    spectrum.entropy_bits()
}

pub fn check_ppt(rho: &BipartiteDensity, tol: &TolerancePolicy) -> Result<PptCheck, CriteriaError> {
    let pt = partial_transpose(&rho.matrix, rho.dims, Subsystem::Second)?;
    let min = sorted_spectrum(&pt)?[0];
    let trace = rho.matrix.trace().re;
    Ok(PptCheck {
        holds: min >= -tol.negativity * trace,
        min_eigenvalue: min,
    })
}

pub fn check_reduction(rho: &BipartiteDensity, tol: &TolerancePolicy) -> Result<ReductionCheck, CriteriaError> {
    let [dx, dy] = rho.dims;
    let first = &kron(&rho.marginal(Subsystem::First), &ComplexMatrix::identity(dy)) - &rho.matrix;
    let second = &kron(&ComplexMatrix::identity(dx), &rho.marginal(Subsystem::Second)) - &rho.matrix;
    let first_margin = sorted_spectrum(&first)?[0];
    let second_margin = sorted_spectrum(&second)?[0];
    Ok(ReductionCheck {
        holds: first_margin >= -tol.negativity && second_margin >= -tol.negativity,
        first_margin,
        second_margin,
    })
}

struct Spectra {
    joint: Vec<f64>,
    first: Vec<f64>,
    second: Vec<f64>,
}

impl Spectra {
    fn of(rho: &BipartiteDensity) -> Result<Self, CriteriaError> {
        Ok(Self {
            joint: sorted_spectrum(&rho.matrix)?,
            first: sorted_spectrum(&rho.marginal(Subsystem::First))?,
            second: sorted_spectrum(&rho.marginal(Subsystem::Second))?,
        })
    }
}

fn majorization_from(s: &Spectra, tol: &TolerancePolicy) -> MajorizationCheck {
    let joint = clamp_spectrum(&s.joint);
    MajorizationCheck {
        first: majorization_compare(&clamp_spectrum(&s.first), &joint, tol.majorization_slack),
        second: majorization_compare(&clamp_spectrum(&s.second), &joint, tol.majorization_slack),
    }
}

fn cond_entropy_from(s: &Spectra) -> CondEntropy {
    let joint = entropy_bits(&clamp_spectrum(&s.joint));
    CondEntropy {
        given_first: joint - entropy_bits(&clamp_spectrum(&s.first)),
        given_second: joint - entropy_bits(&clamp_spectrum(&s.second)),
    }
}

fn max_padded_deviation(p: &Spectrum, q: &Spectrum) -> f64 {
    let len = p.len().max(q.len());
    p.padded(len)
        .iter()
        .zip(q.padded(len))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

fn spectra_equal_from(s: &Spectra, tol: &TolerancePolicy) -> SidedEquality {
    let joint = clamp_spectrum(&s.joint);
    let first_deviation = max_padded_deviation(&clamp_spectrum(&s.first), &joint);
    let second_deviation = max_padded_deviation(&clamp_spectrum(&s.second), &joint);
    SidedEquality {
        first: first_deviation <= tol.spectra_equal,
        second: second_deviation <= tol.spectra_equal,
        first_deviation,
        second_deviation,
    }
}

fn entropy_equal_from(h: &CondEntropy, tol: &TolerancePolicy) -> SidedEquality {
    SidedEquality {
        first: h.given_first.abs() < tol.entropy_zero,
        second: h.given_second.abs() < tol.entropy_zero,
        first_deviation: h.given_first.abs(),
        second_deviation: h.given_second.abs(),
    }
}

fn rank_data_from(s: &Spectra, tol: &TolerancePolicy) -> RankData {
    let count = |ev: &[f64]| -> (usize, bool) {
        let max = ev.iter().copied().fold(0.0f64, f64::max);
        let cut = tol.rank_relative * max;
        let rank = ev.iter().filter(|&&x| x > cut).count();
        let near = ev
            .iter()
            .any(|&x| x >= cut / tol.boundary_factor && x <= cut * tol.boundary_factor);
        (rank, near)
    };
    let (rank, n0) = count(&s.joint);
    let (rx, n1) = count(&s.first);
    let (ry, n2) = count(&s.second);
    RankData {
        rank,
        local_ranks: [rx, ry],
        near_cut: n0 || n1 || n2,
    }
}

/// ρ ≺ ρ_X and ρ ≺ ρ_Y by spectra.
pub fn check_majorization(rho: &BipartiteDensity, tol: &TolerancePolicy) -> Result<MajorizationCheck, CriteriaError> {
    Ok(majorization_from(&Spectra::of(rho)?, tol))
}

pub fn check_cond_entropy(rho: &BipartiteDensity) -> Result<CondEntropy, CriteriaError> {
    Ok(cond_entropy_from(&Spectra::of(rho)?))
}

pub fn check_spectra_equal(rho: &BipartiteDensity, tol: &TolerancePolicy) -> Result<SidedEquality, CriteriaError> {
    Ok(spectra_equal_from(&Spectra::of(rho)?, tol))
}

/// The separability ladder: NPT decides entanglement; PPT plus low rank, a
/// PPT sibling, or a constructor certificate decides separability; anything
/// else stays undecided.
pub fn decide_separability(ppt: &PptCheck, ranks: &RankData, context: &SeparabilityContext) -> Verdict {
    if !ppt.holds {
        // A certified mixture of products cannot be NPT; a negative partial
        // transpose here is float noise on a boundary, so refuse to decide.
        return if context.certified_separable {
            Verdict::Undecided
        } else {
            Verdict::Entangled(EntanglementWitness::Npt)
        };
    }
    if !ranks.near_cut && ranks.rank <= ranks.local_ranks[0].max(ranks.local_ranks[1]) {
        return Verdict::Separable(SeparableRule::RankRule);
    }
    if context.sibling_ppt {
        return Verdict::Separable(SeparableRule::SiblingPpt);
    }
    if context.certified_separable {
        return Verdict::Separable(SeparableRule::Provenance);
    }
    Verdict::Undecided
}

/// Run the whole battery on ρ.
pub fn evaluate(
    rho: &BipartiteDensity,
    context: &SeparabilityContext,
    tol: &TolerancePolicy,
) -> Result<CriteriaReport, CriteriaError> {
    let ppt = check_ppt(rho, tol)?;
    let reduction = check_reduction(rho, tol)?;
    let spectra = Spectra::of(rho)?;
    let cond_entropy = cond_entropy_from(&spectra);
    let ranks = rank_data_from(&spectra, tol);
    Ok(CriteriaReport {
        pair: rho.pair,
        dims: rho.dims,
        ppt,
        reduction,
        majorization: majorization_from(&spectra, tol),
        cond_entropy,
        spectra_equal: spectra_equal_from(&spectra, tol),
        entropy_equal: entropy_equal_from(&cond_entropy, tol),
        ranks,
        separability: decide_separability(&ppt, &ranks, context),
    })
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::linalg::Majorization;
    use crate::states::ghz;

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    #[test]
    fn bell_fails_ppt_and_reduction_by_half() {
        let rho = bell();
        let ppt = check_ppt(&rho, &tol()).unwrap();
        assert!(!ppt.holds);
        assert!((ppt.min_eigenvalue + 0.5).abs() < 1e-12);
        let red = check_reduction(&rho, &tol()).unwrap();
        assert!(!red.holds);
        assert!((red.first_margin + 0.5).abs() < 1e-12);
        assert!((red.second_margin + 0.5).abs() < 1e-12);
        let h = check_cond_entropy(&rho).unwrap();
        assert!((h.given_first + 1.0).abs() < 1e-10);
        let m = check_majorization(&rho, &tol()).unwrap();
        assert_eq!(m.first.relation, Majorization::RightMajorizes);
        assert!(!check_spectra_equal(&rho, &tol()).unwrap().first);
        let r = evaluate(&rho, &SeparabilityContext::default(), &tol()).unwrap();
        assert_eq!(r.separability, Verdict::Entangled(EntanglementWitness::Npt));
    }

    #[test]
    fn product_states_pass_everything() {
        let a = ComplexMatrix::diagonal(&[0.7, 0.3]);
        let b = ComplexMatrix::from_real(3, 3, &[0.5, 0.1, 0.0, 0.1, 0.3, 0.0, 0.0, 0.0, 0.2]).unwrap();
        let rho = density(kron(&a, &b), [2, 3]);
        let r = evaluate(&rho, &SeparabilityContext::default(), &tol()).unwrap();
        assert!(r.ppt.holds && r.reduction.holds && r.majorization.holds());
        // H(Y|X) = H(ρ_Y) on products.
        let hb = crate::linalg::von_neumann_entropy(&b).unwrap();
        assert!((r.cond_entropy.given_first - hb).abs() < 1e-9);

        let pure = density(ComplexMatrix::diagonal(&[1.0, 0.0, 0.0, 0.0]), [2, 2]);
        let r = evaluate(&pure, &SeparabilityContext::default(), &tol()).unwrap();
        assert_eq!(r.majorization.first.relation, Majorization::Equal);
        assert!(r.spectra_equal.both());
        assert_eq!(r.separability, Verdict::Separable(SeparableRule::RankRule));
    }

    #[test]
    fn maximally_mixed_reduction_margin() {
        let d = 3;
        let rho = density(ComplexMatrix::identity(d * d).scale_real(1.0 / 9.0), [d, d]);
        let red = check_reduction(&rho, &tol()).unwrap();
        // I/3 ⊗ I − I/9 = (2/9) I.
        assert!((red.first_margin - 2.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn classical_correlations_have_zero_conditional_entropy() {
        let rho = classical_pair();
        let h = check_cond_entropy(&rho).unwrap();
        assert!(h.given_first.abs() < 1e-12 && h.given_second.abs() < 1e-12);
        let r = evaluate(&rho, &SeparabilityContext::default(), &tol()).unwrap();
        assert!(r.entropy_equal.both() && r.spectra_equal.both());
    }

    #[test]
    fn ghz_reduction_is_separable_by_rank() {
        let rho = ghz(2).unwrap().reduced_density(Pair::AB);
        let r = evaluate(&rho, &SeparabilityContext::default(), &tol()).unwrap();
        assert!(r.ppt.holds);
        assert_eq!(r.ranks.rank, 2);
        assert_eq!(r.separability, Verdict::Separable(SeparableRule::RankRule));
        let spectra = check_spectra_equal(&rho, &tol()).unwrap();
        assert!(spectra.both());
    }

    #[test]
    fn ladder_order() {
        let npt = PptCheck {
            holds: false,
            min_eigenvalue: -0.1,
        };
        let ppt = PptCheck {
            holds: true,
            min_eigenvalue: 0.0,
        };
        let high = RankData {
            rank: 9,
            local_ranks: [3, 3],
            near_cut: false,
        };
        let low = RankData {
            rank: 3,
            local_ranks: [3, 3],
            near_cut: false,
        };
        let fuzzy = RankData { near_cut: true, ..low };
        let none = SeparabilityContext::default();
        let sib = SeparabilityContext {
            sibling_ppt: true,
            ..none
        };
        let cert = SeparabilityContext {
            certified_separable: true,
            ..none
        };
        assert_eq!(
            decide_separability(&npt, &low, &sib),
            Verdict::Entangled(EntanglementWitness::Npt)
        );
        assert_eq!(decide_separability(&npt, &low, &cert), Verdict::Undecided);
        assert_eq!(
            decide_separability(&ppt, &low, &none),
            Verdict::Separable(SeparableRule::RankRule)
        );
        assert_eq!(decide_separability(&ppt, &fuzzy, &none), Verdict::Undecided);
        assert_eq!(
            decide_separability(&ppt, &high, &sib),
            Verdict::Separable(SeparableRule::SiblingPpt)
        );
        assert_eq!(
            decide_separability(&ppt, &high, &cert),
            Verdict::Separable(SeparableRule::Provenance)
        );
        assert_eq!(decide_separability(&ppt, &high, &none), Verdict::Undecided);
    }

    #[test]
    fn verdict_serializes_with_rule_tag() {
        let v = Verdict::Separable(SeparableRule::SiblingPpt);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"{"separable":"sibling-ppt"}"#);
        assert_eq!(serde_json::to_string(&Verdict::Undecided).unwrap(), r#""undecided""#);
    }
}
