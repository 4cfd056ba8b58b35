//! Classes of the three two-party reductions of a tripartite pure state.

mod rank;
mod table;

pub use rank::{als_fit, tensor_rank_bounds, AlsFit, RankEffort, RankProfile, RankSource};
pub use table::{check_table1_consistency, check_table1_row, TableCheck, TableError};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::criteria::{evaluate, CriteriaError, CriteriaReport, SeparabilityContext, Verdict};
use crate::states::{BipartiteDensity, Pair, Party, PureState3};
use crate::tolerance::TolerancePolicy;

/// Separable, PPT-entangled, NPT but reduction-satisfying, reduction-violating;
/// plus "PPT, separability not decided".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EntClass {
    S,
    P,
    R,
    N,
    #[serde(rename = "S|P")]
    UndecidedSP,
}

impl EntClass {
    /// The decided classes this value may stand for.
    pub fn completions(self) -> &'static [EntClass] {
        match self {
            EntClass::UndecidedSP => &[EntClass::S, EntClass::P],
            EntClass::S => &[EntClass::S],
            EntClass::P => &[EntClass::P],
            EntClass::R => &[EntClass::R],
            EntClass::N => &[EntClass::N],
        }
    }

    pub fn is_decided(self) -> bool {
        self != EntClass::UndecidedSP
    }

    fn level(self) -> u8 {
        match self {
            EntClass::S => 0,
            EntClass::UndecidedSP => 1,
            EntClass::P => 2,
            EntClass::R => 3,
            EntClass::N => 4,
        }
    }

    /// Least upper bound in S ≤ P ≤ R ≤ N, applied to every completion:
    /// max(S|P, S) stays S|P, max(S|P, P) is P.
    pub fn max(self, other: EntClass) -> EntClass {
        if self.level() >= other.level() {
            self
        } else {
            other
        }
    }

    pub fn letter(self) -> char {
        match self {
            EntClass::S => 'S',
            EntClass::P => 'P',
            EntClass::R => 'R',
            EntClass::N => 'N',
            EntClass::UndecidedSP => '?',
        }
    }
}

impl fmt::Display for EntClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntClass::UndecidedSP => f.write_str("S|P"),
            other => write!(f, "{}", other.letter()),
        }
    }
}

/// Classes of (ρ_AB, ρ_BC, ρ_CA).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassTriple {
    pub ab: EntClass,
    pub bc: EntClass,
    pub ca: EntClass,
}

impl ClassTriple {
    pub fn new(ab: EntClass, bc: EntClass, ca: EntClass) -> Self {
        Self { ab, bc, ca }
    }

    pub fn from_slots(s: [EntClass; 3]) -> Self {
        Self::new(s[0], s[1], s[2])
    }

    /// Parse a string such as `"SNS"`; `?` stands for S|P.
    pub fn parse(s: &str) -> Option<Self> {
        let cls: Vec<EntClass> = s
            .chars()
            .map(|c| match c {
                'S' => Some(EntClass::S),
                'P' => Some(EntClass::P),
                'R' => Some(EntClass::R),
                'N' => Some(EntClass::N),
                '?' => Some(EntClass::UndecidedSP),
                _ => None,
            })
            .collect::<Option<_>>()?;
        (cls.len() == 3).then(|| Self::new(cls[0], cls[1], cls[2]))
    }

    pub fn slots(&self) -> [EntClass; 3] {
        [self.ab, self.bc, self.ca]
    }

    pub fn get(&self, pair: Pair) -> EntClass {
        self.slots()[pair.slot()]
    }

    pub fn is_decided(&self) -> bool {
        self.slots().iter().all(|c| c.is_decided())
    }

    /// Componentwise maximum.
    pub fn max(&self, other: &ClassTriple) -> ClassTriple {
        ClassTriple::new(self.ab.max(other.ab), self.bc.max(other.bc), self.ca.max(other.ca))
    }

    /// Every decided triple this one may stand for.
    pub fn completions(&self) -> Vec<ClassTriple> {
        let mut out = Vec::new();
        for &ab in self.ab.completions() {
            for &bc in self.bc.completions() {
                for &ca in self.ca.completions() {
                    out.push(ClassTriple::new(ab, bc, ca));
                }
            }
        }
        out
    }

    /// The triple of the state with parties relabelled so that new party
    /// slot `s` holds old party `perm[s]`.
    pub fn permuted(&self, perm: [Party; 3]) -> ClassTriple {
        let slot_of = |p: Party| perm.iter().position(|&q| q == p).expect("permutation");
        let mut out = [EntClass::S; 3];
        for pair in Pair::ALL {
            let (x, y) = pair.parties();
            let new_pair = Pair::of(Party::from_index(slot_of(x)), Party::from_index(slot_of(y)));
            out[new_pair.slot()] = self.get(pair);
        }
        ClassTriple::from_slots(out)
    }
}

impl fmt::Display for ClassTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in self.slots() {
            write!(f, "{}", c.letter())?;
        }
        Ok(())
    }
}

/// The eight canonical subsets, each sorted S ≤ P ≤ R ≤ N across (AB, BC, CA).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Subset {
    SSS,
    SSN,
    SNN,
    PNN,
    RRR,
    RRN,
    RNN,
    NNN,
}

impl Subset {
    pub const ALL: [Subset; 8] = [
        Subset::SSS,
        Subset::SSN,
        Subset::SNN,
        Subset::PNN,
        Subset::RRR,
        Subset::RRN,
        Subset::RNN,
        Subset::NNN,
    ];

    pub fn triple(self) -> ClassTriple {
        ClassTriple::parse(&format!("{self:?}")).expect("static labels")
    }

    /// Number of distinct arrangements over the three pair slots.
    pub fn arrangements(self) -> usize {
        match self {
            Subset::SSS | Subset::RRR | Subset::NNN => 1,
            _ => 3,
        }
    }

    fn of_sorted(slots: [EntClass; 3]) -> Option<Subset> {
        Subset::ALL.into_iter().find(|s| s.triple().slots() == slots)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// A decided triple placed in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Canonical {
    pub subset: Subset,
    /// Canonical slot `s` carries the class of the original pair `order[s]`.
    pub order: [Pair; 3],
}

impl Canonical {
    /// Original party playing canonical party A, B, C. Canonical slot s
    /// (AB, BC, CA) excludes canonical party C, A, B respectively.
    pub fn party_map(&self) -> [Party; 3] {
        [
            self.order[Pair::BC.slot()].complement(),
            self.order[Pair::CA.slot()].complement(),
            self.order[Pair::AB.slot()].complement(),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CanonicalError {
    #[error("triple {0} is not in any of the 18 subsets")]
    Outside(ClassTriple),
    #[error("triple {triple} is undecided; candidates {candidates:?}")]
    Undecided {
        triple: ClassTriple,
        candidates: Vec<Canonical>,
    },
}

/// Canonical subset and orientation of a decided triple (an undecided one
/// reports its consistent candidates).
pub fn canonical_triple(t: &ClassTriple) -> Result<Canonical, CanonicalError> {
    if !t.is_decided() {
        return Err(CanonicalError::Undecided {
            triple: *t,
            candidates: candidates(t),
        });
    }
    let mut order = Pair::ALL;
    order.sort_by_key(|&p| t.get(p));
    let slots = order.map(|p| t.get(p));
    match Subset::of_sorted(slots) {
        Some(subset) => Ok(Canonical { subset, order }),
        None => Err(CanonicalError::Outside(*t)),
    }
}

/// Canonical forms of every completion that lands in one of the 18 subsets.
pub fn candidates(t: &ClassTriple) -> Vec<Canonical> {
    let mut out: Vec<Canonical> = t
        .completions()
        .iter()
        .filter_map(|c| canonical_triple(c).ok())
        .collect();
    out.sort_by_key(|c| c.subset);
    out.dedup_by_key(|c| c.subset);
    out
}

/// Whether some completion of the triple is among the 18 subsets.
pub fn in_known_subsets(t: &ClassTriple) -> bool {
    !candidates(t).is_empty()
}

/// The weak-entanglement implications for one completion: a P pair forces
/// N on both others; an R pair forces R or N on both others.
fn monogamy_holds_decided(t: &ClassTriple) -> bool {
    Pair::ALL.into_iter().all(|pair| {
        let others = pair.siblings().map(|p| t.get(p));
        match t.get(pair) {
            EntClass::P => others.iter().all(|&c| c == EntClass::N),
            EntClass::R => others.iter().all(|&c| matches!(c, EntClass::R | EntClass::N)),
            _ => true,
        }
    })
}

/// Converse monogamy, with S|P slots satisfied by at least one completion.
pub fn converse_monogamy_holds(t: &ClassTriple) -> bool {
    t.completions().iter().any(monogamy_holds_decided)
}

/// Class of one reduction from its criteria report.
pub fn classify_reduced(report: &CriteriaReport) -> EntClass {
    if !report.reduction.holds {
        EntClass::N
    } else if !report.ppt.holds {
        EntClass::R
    } else {
        match report.separability {
            Verdict::Separable(_) => EntClass::S,
            // Only NPT witnesses exist, so a PPT operator is never found
            // entangled; kept for completeness of the match.
            Verdict::Entangled(_) => EntClass::P,
            Verdict::Undecided => EntClass::UndecidedSP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateClassification {
    pub triple: ClassTriple,
    /// Reports for AB, BC, CA in that order.
    pub reports: [CriteriaReport; 3],
    pub ranks: RankProfile,
}

impl StateClassification {
    pub fn report(&self, pair: Pair) -> &CriteriaReport {
        &self.reports[pair.slot()]
    }
}

/// Battery on the three reductions with the PPT status of the siblings and
/// the state's separability certificates fed to each ladder.
pub fn classify_reports(
    psi: &PureState3,
    tol: &TolerancePolicy,
) -> Result<([CriteriaReport; 3], ClassTriple), CriteriaError> {
    let rhos: [BipartiteDensity; 3] = Pair::ALL.map(|p| psi.reduced_density(p));
    let mut ppt = [false; 3];
    for (slot, rho) in rhos.iter().enumerate() {
        ppt[slot] = crate::criteria::check_ppt(rho, tol)?.holds;
    }
    let mut reports = Vec::with_capacity(3);
    for (slot, pair) in Pair::ALL.into_iter().enumerate() {
        let ctx = SeparabilityContext {
            sibling_ppt: pair.siblings().iter().any(|s| ppt[s.slot()]),
            certified_separable: psi.provenance().is_some_and(|p| p.certifies_separable(pair)),
        };
        reports.push(evaluate(&rhos[slot], &ctx, tol)?);
    }
    let reports: [CriteriaReport; 3] = reports.try_into().expect("three pairs");
    let triple = ClassTriple::from_slots([0, 1, 2].map(|s| classify_reduced(&reports[s])));
    Ok((reports, triple))
}

/// Full classification: triple, per-pair reports, rank profile.
pub fn classify_state(
    psi: &PureState3,
    tol: &TolerancePolicy,
    effort: &RankEffort,
) -> Result<StateClassification, CriteriaError> {
    let (reports, triple) = classify_reports(psi, tol)?;
    Ok(StateClassification {
        triple,
        reports,
        ranks: tensor_rank_bounds(psi, effort, tol),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;
    use crate::states::{ghz, mc_state, permute_parties, rrr_symmetric, w_state};
    use EntClass::*;

    fn t(s: &str) -> ClassTriple {
        ClassTriple::parse(s).unwrap()
    }

    #[test]
    fn lattice_max() {
        assert_eq!(S.max(N), N);
        assert_eq!(UndecidedSP.max(S), UndecidedSP);
        assert_eq!(UndecidedSP.max(P), P);
        assert_eq!(R.max(UndecidedSP), R);
        assert_eq!(t("SNS").max(&t("SSN")), t("SNN"));
    }

    #[test]
    fn canonical_forms() {
        let c = canonical_triple(&t("SNS")).unwrap();
        assert_eq!(c.subset, Subset::SSN);
        assert_eq!(c.order, [Pair::AB, Pair::CA, Pair::BC]);
        let c = canonical_triple(&t("NNN")).unwrap();
        assert_eq!((c.subset, c.order), (Subset::NNN, Pair::ALL));
        assert!(matches!(canonical_triple(&t("PSN")), Err(CanonicalError::Outside(_))));
        assert!(matches!(canonical_triple(&t("RSN")), Err(CanonicalError::Outside(_))));
        let count: usize = Subset::ALL.iter().map(|s| s.arrangements()).sum();
        assert_eq!(count, 18);
    }

    #[test]
    fn undecided_candidates() {
        let cands = candidates(&t("?NN"));
        let subsets: Vec<_> = cands.iter().map(|c| c.subset).collect();
        assert_eq!(subsets, vec![Subset::SNN, Subset::PNN]);
        assert!(candidates(&t("??N")).iter().all(|c| c.subset == Subset::SSN));
        assert!(converse_monogamy_holds(&t("?NN")));
        assert!(!converse_monogamy_holds(&t("?RN")));
    }

    #[test]
    fn party_map_reads_canonical_orientation() {
        // SNS: the N pair is BC, so canonical C–A must be original B–C.
        let c = canonical_triple(&t("SNS")).unwrap();
        let [a, b, cc] = c.party_map();
        assert_eq!(Pair::of(cc, a), Pair::BC);
        assert_eq!(Pair::of(b, cc), Pair::CA);
        assert_eq!(Pair::of(a, b), Pair::AB);
    }

    #[test]
    fn known_witnesses() {
        let tol = TolerancePolicy::default();
        let none = RankEffort::none();
        assert_eq!(classify_state(&ghz(3).unwrap(), &tol, &none).unwrap().triple, t("SSS"));
        assert_eq!(classify_state(&w_state(), &tol, &none).unwrap().triple, t("NNN"));
        assert_eq!(
            classify_state(&rrr_symmetric(3).unwrap(), &tol, &none).unwrap().triple,
            t("RRR")
        );
        let s = 0.5f64.sqrt();
        let (one, zero) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
        let mc = mc_state(&[0.5, 0.5], &[vec![one, zero], vec![one * s, one * s]]).unwrap();
        assert_eq!(classify_state(&mc, &tol, &none).unwrap().triple, t("SNS"));
    }

    #[test]
    fn permuting_parties_permutes_triple() {
        let tol = TolerancePolicy::default();
        let s = 0.5f64.sqrt();
        let (one, zero) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
        let mc = mc_state(&[0.5, 0.5], &[vec![one, zero], vec![one * s, one * s]]).unwrap();
        let base = classify_reports(&mc, &tol).unwrap().1;
        for perm in [
            [Party::B, Party::C, Party::A],
            [Party::C, Party::A, Party::B],
            [Party::B, Party::A, Party::C],
        ] {
            let moved = permute_parties(&mc, perm).unwrap();
            assert_eq!(classify_reports(&moved, &tol).unwrap().1, base.permuted(perm));
        }
    }
}
