use serde::{Deserialize, Serialize};

use super::CriteriaReport;
use crate::tolerance::TolerancePolicy;

/// One link of the chain separable ⟹ PPT ⟹ reduction ⟹ majorization ⟹
/// non-negative conditional entropy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Implication {
    SeparableImpliesPpt,
    PptImpliesReduction,
    ReductionImpliesMajorization,
    MajorizationImpliesEntropy,
}

impl std::fmt::Display for Implication {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Implication::SeparableImpliesPpt => "separable => PPT",
            Implication::PptImpliesReduction => "PPT => reduction",
            Implication::ReductionImpliesMajorization => "reduction => majorization",
            Implication::MajorizationImpliesEntropy => "majorization => H(Y|X), H(X|Y) >= 0",
        })
    }
}

/// An inverted implication, with the margins that decided both sides.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub implication: Implication,
    /// Margin of the premise (non-negative when it held cleanly).
    pub premise_margin: f64,
    /// Margin of the failed conclusion (negative).
    pub conclusion_margin: f64,
    /// Either margin lies within the boundary factor of its tolerance.
    pub boundary: bool,
}

/// Every inverted link of the chain. Separability takes part only when decided.
pub fn hierarchy_audit(report: &CriteriaReport, tol: &TolerancePolicy) -> Vec<Violation> {
    let ppt = (report.ppt.holds, report.ppt.min_eigenvalue, tol.negativity);
    let red = (report.reduction.holds, report.reduction.margin(), tol.negativity);
    let maj = (
        report.majorization.holds(),
        report.majorization.margin(),
        tol.majorization_slack,
    );
    let ent = (
        report.cond_entropy_nonnegative(tol),
        report.cond_entropy.min(),
        tol.entropy_sign,
    );
    let mut links = vec![
        (Implication::PptImpliesReduction, ppt, red),
        (Implication::ReductionImpliesMajorization, red, maj),
        (Implication::MajorizationImpliesEntropy, maj, ent),
    ];
    if report.separability.is_separable() {
        // The ladder never calls an NPT operator separable, so this link can
        // only trip on a corrupted report; its premise has no margin.
        links.insert(0, (Implication::SeparableImpliesPpt, (true, f64::INFINITY, 0.0), ppt));
    }
    links
        .into_iter()
        .filter(|(_, premise, conclusion)| premise.0 && !conclusion.0)
        .map(|(implication, (_, pm, ptol), (_, cm, ctol))| Violation {
            implication,
            premise_margin: pm,
            conclusion_margin: cm,
            boundary: tol.is_boundary(pm, ptol) || tol.is_boundary(cm, ctol),
        })
        .collect()
}
