//! Single-state checks. Suites and replay share this code, so a recorded
//! violation re-runs exactly the computation that produced it.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::classify::{
    candidates, canonical_triple, check_table1_row, classify_reports, converse_monogamy_holds, in_known_subsets,
    tensor_rank_bounds, ClassTriple, EntClass, RankEffort, Subset,
};
use crate::criteria::{hierarchy_audit, maximally_correlated_test, CriteriaError, CriteriaReport};
use crate::linalg::Subsystem;
use crate::states::{Pair, PureState3};
use crate::tolerance::TolerancePolicy;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Check {
    /// No inverted link of the criteria chain on any reduction.
    Hierarchy,
    /// The triple lies in the 18 subsets and obeys converse monogamy.
    KnownSubsets,
    /// With a PPT sibling: separable ⟺ reduction and PPT ⟺ reduction.
    Theorem1 { pair: Pair },
    /// With a PPT sibling: the seven separability flags agree.
    Theorem2 { pair: Pair },
    /// Two PPT reductions force a maximally correlated third of class S or N;
    /// never two P reductions.
    Thapliyal,
    /// Separability, PPT and reduction agree on `pair`.
    RankCertifiedFlags { pair: Pair },
    /// Majorization holds while reduction fails clearly on `pair`.
    MajorizationGap { pair: Pair },
    /// The triple equals `expected`; with `allow_undecided`, an S|P slot may
    /// stand for an expected S or P if it is PPT with two N siblings.
    ExpectedTriple {
        expected: ClassTriple,
        allow_undecided: bool,
    },
    /// The rank relations of the expected subset hold in its orientation.
    RankTable { expected: ClassTriple },
    /// The triple lands only in the listed subsets.
    AllowedSubsets { allowed: Vec<Subset> },
}

impl Check {
    pub fn name(&self) -> &'static str {
        match self {
            Check::Hierarchy => "hierarchy",
            Check::KnownSubsets => "known-subsets",
            Check::Theorem1 { .. } => "theorem1",
            Check::Theorem2 { .. } => "theorem2",
            Check::Thapliyal => "thapliyal",
            Check::RankCertifiedFlags { .. } => "rank-certified-flags",
            Check::MajorizationGap { .. } => "majorization-gap",
            Check::ExpectedTriple { .. } => "expected-triple",
            Check::RankTable { .. } => "rank-table",
            Check::AllowedSubsets { .. } => "allowed-subsets",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub message: String,
    pub margins: BTreeMap<String, f64>,
    /// Every deciding margin is within the boundary factor of its threshold.
    pub boundary: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    /// False when the check's hypothesis does not hold for this state.
    pub applicable: bool,
    pub findings: Vec<Finding>,
}

impl CheckOutcome {
    fn ok() -> Self {
        Self {
            applicable: true,
            findings: Vec::new(),
        }
    }

    fn not_applicable() -> Self {
        Self {
            applicable: false,
            findings: Vec::new(),
        }
    }

    fn with(findings: Vec<Finding>) -> Self {
        Self {
            applicable: true,
            findings,
        }
    }
}

/// Reports and triple of one state, computed once and shared by checks.
pub struct Evaluated {
    pub reports: [CriteriaReport; 3],
    pub triple: ClassTriple,
}

impl Evaluated {
    pub fn of(psi: &PureState3, tol: &TolerancePolicy) -> Result<Self, CriteriaError> {
        let (reports, triple) = classify_reports(psi, tol)?;
        Ok(Self { reports, triple })
    }

    pub fn report(&self, pair: Pair) -> &CriteriaReport {
        &self.reports[pair.slot()]
    }
}

pub fn run_check(check: &Check, psi: &PureState3, tol: &TolerancePolicy) -> Result<CheckOutcome, CriteriaError> {
    apply(check, psi, &Evaluated::of(psi, tol)?, tol)
}

fn margins_of(r: &CriteriaReport) -> BTreeMap<String, f64> {
    let p = r.pair;
    [
        ("ppt_min_eigenvalue", r.ppt.min_eigenvalue),
        ("reduction_margin", r.reduction.margin()),
        ("majorization_margin", r.majorization.margin()),
        ("cond_entropy_min", r.cond_entropy.min()),
        ("spectra_deviation_first", r.spectra_equal.first_deviation),
        ("spectra_deviation_second", r.spectra_equal.second_deviation),
        ("entropy_deviation_first", r.entropy_equal.first_deviation),
        ("entropy_deviation_second", r.entropy_equal.second_deviation),
    ]
    .into_iter()
    .map(|(k, v)| (format!("{p}.{k}"), v))
    .collect()
}

/// A value compared against a positive threshold is ambiguous when it lies
/// within the boundary factor of it on either side.
fn near_threshold(value: f64, threshold: f64, tol: &TolerancePolicy) -> bool {
    value > threshold / tol.boundary_factor && value < threshold * tol.boundary_factor
}

/// Whether any margin the flags of `r` were decided on is too close to call.
fn report_is_boundary(r: &CriteriaReport, tol: &TolerancePolicy) -> bool {
    tol.is_boundary(r.ppt.min_eigenvalue, tol.negativity)
        || tol.is_boundary(r.reduction.margin(), tol.negativity)
        || tol.is_boundary(r.majorization.margin(), tol.majorization_slack)
        || tol.is_boundary(r.cond_entropy.min(), tol.entropy_sign)
        || near_threshold(r.spectra_equal.first_deviation, tol.spectra_equal, tol)
        || near_threshold(r.spectra_equal.second_deviation, tol.spectra_equal, tol)
        || near_threshold(r.entropy_equal.first_deviation, tol.entropy_zero, tol)
        || near_threshold(r.entropy_equal.second_deviation, tol.entropy_zero, tol)
        || r.ranks.near_cut
}

fn finding(message: String, r: &CriteriaReport, tol: &TolerancePolicy) -> Finding {
    Finding {
        message,
        margins: margins_of(r),
        boundary: report_is_boundary(r, tol),
    }
}

/// The side of `pair` not shared with the PPT `sibling`.
fn unshared_side(pair: Pair, sibling: Pair) -> Subsystem {
    let shared = pair.shared_party(sibling).expect("siblings share a party");
    if pair.parties().0 == shared {
        Subsystem::Second
    } else {
        Subsystem::First
    }
}

fn ppt_siblings(ev: &Evaluated, pair: Pair) -> Vec<Pair> {
    pair.siblings()
        .into_iter()
        .filter(|s| ev.report(*s).ppt.holds)
        .collect()
}

pub fn apply(
    check: &Check,
    psi: &PureState3,
    ev: &Evaluated,
    tol: &TolerancePolicy,
) -> Result<CheckOutcome, CriteriaError> {
    Ok(match check {
        Check::Hierarchy => {
            let mut out = Vec::new();
            for r in &ev.reports {
                for v in hierarchy_audit(r, tol) {
                    let mut margins = margins_of(r);
                    margins.insert(format!("{}.premise_margin", r.pair), v.premise_margin);
                    margins.insert(format!("{}.conclusion_margin", r.pair), v.conclusion_margin);
                    out.push(Finding {
                        message: format!("{}: inverted link {}", r.pair, v.implication),
                        margins,
                        boundary: v.boundary,
                    });
                }
            }
            CheckOutcome::with(out)
        }
        Check::KnownSubsets => {
            let t = ev.triple;
            let mut out = Vec::new();
            if !in_known_subsets(&t) {
                out.push(format!("triple {t} is outside the 18 subsets"));
            }
            if !converse_monogamy_holds(&t) {
                out.push(format!("triple {t} breaks converse monogamy"));
            }
            CheckOutcome::with(
                out.into_iter()
                    .map(|m| Finding {
                        message: m,
                        margins: ev.reports.iter().flat_map(margins_of).collect(),
                        boundary: ev.reports.iter().any(|r| report_is_boundary(r, tol)),
                    })
                    .collect(),
            )
        }
        Check::Theorem1 { pair } => {
            if ppt_siblings(ev, *pair).is_empty() {
                return Ok(CheckOutcome::not_applicable());
            }
            let r = ev.report(*pair);
            let mut out = Vec::new();
            if !r.separability.is_decided() {
                out.push(finding(
                    format!("{pair}: separability undecided despite a PPT sibling"),
                    r,
                    tol,
                ));
            } else if r.separability.is_separable() != r.reduction.holds {
                out.push(finding(
                    format!(
                        "{pair}: separable={} but reduction={}",
                        r.separability.is_separable(),
                        r.reduction.holds
                    ),
                    r,
                    tol,
                ));
            }
            if r.ppt.holds != r.reduction.holds {
                out.push(finding(
                    format!("{pair}: PPT={} but reduction={}", r.ppt.holds, r.reduction.holds),
                    r,
                    tol,
                ));
            }
            CheckOutcome::with(out)
        }
        Check::Theorem2 { pair } => {
            let sibs = ppt_siblings(ev, *pair);
            if sibs.is_empty() {
                return Ok(CheckOutcome::not_applicable());
            }
            let r = ev.report(*pair);
            let mut out = Vec::new();
            for sib in sibs {
                let side = unshared_side(*pair, sib);
                let flags = [
                    ("separable", r.separability.is_separable()),
                    ("ppt", r.ppt.holds),
                    ("reduction", r.reduction.holds),
                    ("majorization", r.majorization.holds()),
                    ("cond_entropy", r.cond_entropy_nonnegative(tol)),
                    ("spectra_equal", r.spectra_equal.on(side)),
                    ("entropy_equal", r.entropy_equal.on(side)),
                ];
                if flags.iter().any(|f| f.1 != flags[0].1) {
                    let listed: Vec<String> = flags.iter().map(|(n, v)| format!("{n}={v}")).collect();
                    out.push(finding(
                        format!("{pair} (PPT sibling {sib}, side {side:?}): {}", listed.join(" ")),
                        r,
                        tol,
                    ));
                }
            }
            CheckOutcome::with(out)
        }
        Check::Thapliyal => {
            let mut out = Vec::new();
            let p_count = ev.triple.slots().iter().filter(|&&c| c == EntClass::P).count();
            if p_count >= 2 {
                out.push(Finding {
                    message: format!("triple {} has two P reductions", ev.triple),
                    margins: BTreeMap::new(),
                    boundary: false,
                });
            }
            let ppt_count = ev.reports.iter().filter(|r| r.ppt.holds).count();
            if ppt_count < 2 {
                return Ok(CheckOutcome::with(out));
            }
            for pair in Pair::ALL {
                if ppt_siblings(ev, pair).len() < 2 {
                    continue;
                }
                let r = ev.report(pair);
                let mc = maximally_correlated_test(&psi.reduced_density(pair), tol)?;
                let class = ev.triple.get(pair);
                if !mc.holds || !matches!(class, EntClass::S | EntClass::N) {
                    let mut f = finding(
                        format!(
                            "{pair}: both siblings PPT but maximally-correlated={} and class {class}",
                            mc.holds
                        ),
                        r,
                        tol,
                    );
                    f.margins
                        .insert(format!("{pair}.commutator_residual"), mc.commutator_residual);
                    f.margins
                        .insert(format!("{pair}.alignment_residual"), mc.alignment_residual);
                    f.boundary = f.boundary
                        || near_threshold(mc.commutator_residual, tol.commutator, tol)
                        || near_threshold(mc.alignment_residual, tol.commutator, tol);
                    out.push(f);
                }
            }
            CheckOutcome::with(out)
        }
        Check::RankCertifiedFlags { pair } => {
            let r = ev.report(*pair);
            let flags = [r.separability.is_separable(), r.ppt.holds, r.reduction.holds];
            if !r.separability.is_decided() || flags.iter().any(|&f| f != flags[0]) {
                CheckOutcome::with(vec![finding(
                    format!(
                        "{pair}: separability={:?} ppt={} reduction={}",
                        r.separability, r.ppt.holds, r.reduction.holds
                    ),
                    r,
                    tol,
                )])
            } else {
                CheckOutcome::ok()
            }
        }
        Check::MajorizationGap { pair } => {
            let r = ev.report(*pair);
            let clear_failure = r.reduction.margin() < -tol.boundary_factor * tol.negativity;
            if r.majorization.holds() && clear_failure {
                CheckOutcome::ok()
            } else {
                CheckOutcome::with(vec![finding(
                    format!(
                        "{pair}: majorization={} reduction margin {:e}",
                        r.majorization.holds(),
                        r.reduction.margin()
                    ),
                    r,
                    tol,
                )])
            }
        }
        Check::ExpectedTriple {
            expected,
            allow_undecided,
        } => {
            let got = ev.triple;
            if got == *expected {
                return Ok(CheckOutcome::ok());
            }
            let explained = *allow_undecided
                && got.completions().contains(expected)
                && Pair::ALL.into_iter().all(|p| {
                    got.get(p).is_decided()
                        || (ev.report(p).ppt.holds && p.siblings().iter().all(|s| got.get(*s) == EntClass::N))
                });
            if explained {
                CheckOutcome::ok()
            } else {
                CheckOutcome::with(vec![Finding {
                    message: format!("expected {expected}, classified {got}"),
                    margins: ev.reports.iter().flat_map(margins_of).collect(),
                    // Only the PPT call and the rank cut decide a slot.
                    boundary: Pair::ALL
                        .into_iter()
                        .filter(|p| got.get(*p) != expected.get(*p))
                        .all(|p| {
                            let r = ev.report(p);
                            r.ranks.near_cut || tol.is_boundary(r.ppt.min_eigenvalue, tol.negativity)
                        }),
                }])
            }
        }
        Check::RankTable { expected } => {
            let canonical = match canonical_triple(expected) {
                Ok(c) => c,
                Err(e) => {
                    return Ok(CheckOutcome::with(vec![Finding {
                        message: e.to_string(),
                        margins: BTreeMap::new(),
                        boundary: false,
                    }]))
                }
            };
            let profile = tensor_rank_bounds(psi, &RankEffort::none(), tol);
            match check_table1_row(&canonical, &profile) {
                Err(_) => CheckOutcome::not_applicable(),
                Ok(c) if c.pass => CheckOutcome::ok(),
                Ok(c) => CheckOutcome::with(vec![Finding {
                    message: format!("{} row fails: {}", c.subset, c.detail),
                    margins: BTreeMap::new(),
                    boundary: false,
                }]),
            }
        }
        Check::AllowedSubsets { allowed } => {
            let cands = candidates(&ev.triple);
            let ok = !cands.is_empty() && cands.iter().all(|c| allowed.contains(&c.subset));
            if ok {
                CheckOutcome::ok()
            } else {
                CheckOutcome::with(vec![Finding {
                    message: format!("triple {} lands outside {allowed:?}", ev.triple),
                    margins: ev.reports.iter().flat_map(margins_of).collect(),
                    boundary: ev.reports.iter().any(|r| report_is_boundary(r, tol)),
                }])
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{ghz, psi_a, w_state};

    #[test]
    fn unshared_side_matches_pair_orientation() {
        assert_eq!(unshared_side(Pair::AB, Pair::BC), Subsystem::First);
        assert_eq!(unshared_side(Pair::AB, Pair::CA), Subsystem::Second);
        assert_eq!(unshared_side(Pair::CA, Pair::BC), Subsystem::Second);
    }

    #[test]
    fn ghz_passes_everything_it_applies_to() {
        let tol = TolerancePolicy::default();
        let g = ghz(2).unwrap();
        for check in [
            Check::Hierarchy,
            Check::KnownSubsets,
            Check::Theorem1 { pair: Pair::AB },
            Check::Theorem2 { pair: Pair::AB },
            Check::Thapliyal,
            Check::RankCertifiedFlags { pair: Pair::AB },
            Check::RankTable {
                expected: ClassTriple::parse("SSS").unwrap(),
            },
        ] {
            let out = run_check(&check, &g, &tol).unwrap();
            assert!(out.applicable && out.findings.is_empty(), "{check:?}");
        }
    }

    #[test]
    fn wrong_expectation_is_reported() {
        let tol = TolerancePolicy::default();
        let check = Check::ExpectedTriple {
            expected: ClassTriple::parse("SSS").unwrap(),
            allow_undecided: false,
        };
        let out = run_check(&check, &w_state(), &tol).unwrap();
        assert_eq!(out.findings.len(), 1);
        assert!(out.findings[0].message.contains("NNN"));
        let gap = run_check(&Check::MajorizationGap { pair: Pair::AB }, &psi_a(3).unwrap(), &tol).unwrap();
        assert!(gap.findings.is_empty());
        let theorem = run_check(&Check::Theorem1 { pair: Pair::AB }, &w_state(), &tol).unwrap();
        assert!(!theorem.applicable);
    }
}
