//! Verification suites over constructed families and random ensembles.
//!
//! Every suite is a pure function of its [`SuiteConfig`]; reports carry the
//! master seed, the PRNG identity and the tolerance policy, and each recorded
//! violation carries the state and the check needed to reproduce it.

mod checks;
mod suites;
pub mod witnesses;

pub use checks::{apply, run_check, Check, CheckOutcome, Evaluated, Finding};
pub use suites::{
    run_census, run_converse_monogamy_suite, run_hierarchy_suite, run_lemma4_suite, run_monoid_suite,
    run_slocc_mixing_demo, run_thapliyal_suite, run_theorem1_suite, run_theorem2_suite,
};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::ClassTriple;
use crate::criteria::CriteriaError;
use crate::io::{IoError, StateFile};
use crate::states::{PureState3, StateError, PRNG_ALGORITHM};
use crate::tolerance::TolerancePolicy;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Criteria(#[from] CriteriaError),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
}

/// Sample counts for each suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteSizes {
    pub hierarchy_per_dims: usize,
    pub theorem: usize,
    pub monogamy_per_dims: usize,
    pub thapliyal: usize,
    pub lemma4: usize,
    pub slocc_ghz: usize,
    pub slocc_rrr: usize,
}

impl Default for SuiteSizes {
    fn default() -> Self {
        Self {
            hierarchy_per_dims: 750,
            theorem: 500,
            monogamy_per_dims: 250,
            thapliyal: 300,
            lemma4: 200,
            slocc_ghz: 200,
            slocc_rrr: 100,
        }
    }
}

impl SuiteSizes {
    /// Small ensembles for quick runs.
    pub fn smoke() -> Self {
        Self {
            hierarchy_per_dims: 20,
            theorem: 30,
            monogamy_per_dims: 20,
            thapliyal: 20,
            lemma4: 20,
            slocc_ghz: 24,
            slocc_rrr: 12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub tolerance: TolerancePolicy,
    pub sizes: SuiteSizes,
}

impl SuiteConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            tolerance: TolerancePolicy::default(),
            sizes: SuiteSizes::default(),
        }
    }

    pub fn with_sizes(mut self, sizes: SuiteSizes) -> Self {
        self.sizes = sizes;
        self
    }

    pub fn with_tolerance(mut self, tolerance: TolerancePolicy) -> Self {
        self.tolerance = tolerance;
        self
    }
}

/// Dimension sets used by the Haar sweeps.
pub const SWEEP_DIMS: [[usize; 3]; 4] = [[2, 2, 2], [2, 2, 4], [3, 3, 3], [2, 3, 4]];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteName {
    Hierarchy,
    Theorem1,
    Theorem2,
    Monogamy,
    Thapliyal,
    Lemma4,
    Monoid,
    Census,
    Slocc,
}

impl SuiteName {
    pub const ALL: [SuiteName; 9] = [
        SuiteName::Hierarchy,
        SuiteName::Theorem1,
        SuiteName::Theorem2,
        SuiteName::Monogamy,
        SuiteName::Thapliyal,
        SuiteName::Lemma4,
        SuiteName::Monoid,
        SuiteName::Census,
        SuiteName::Slocc,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Hierarchy => "hierarchy",
            SuiteName::Theorem1 => "theorem1",
            SuiteName::Theorem2 => "theorem2",
            SuiteName::Monogamy => "monogamy",
            SuiteName::Thapliyal => "thapliyal",
            SuiteName::Lemma4 => "lemma4",
            SuiteName::Monoid => "monoid",
            SuiteName::Census => "census",
            SuiteName::Slocc => "slocc",
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteName {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SuiteName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| HarnessError::UnknownSuite(s.to_string()))
    }
}

pub fn run_suite(name: SuiteName, cfg: &SuiteConfig) -> Result<SuiteReport, HarnessError> {
    let n = &cfg.sizes;
    match name {
        SuiteName::Hierarchy => run_hierarchy_suite(n.hierarchy_per_dims, &SWEEP_DIMS, cfg),
        SuiteName::Theorem1 => run_theorem1_suite(n.theorem, [2, 2], cfg),
        SuiteName::Theorem2 => run_theorem2_suite(n.theorem, [2, 2], cfg),
        SuiteName::Monogamy => run_converse_monogamy_suite(n.monogamy_per_dims, &SWEEP_DIMS, cfg),
        SuiteName::Thapliyal => run_thapliyal_suite(n.thapliyal, cfg),
        SuiteName::Lemma4 => run_lemma4_suite(n.lemma4, cfg),
        SuiteName::Monoid => run_monoid_suite(cfg),
        SuiteName::Census => run_census(cfg),
        SuiteName::Slocc => run_slocc_mixing_demo(n.slocc_ghz, n.slocc_rrr, cfg),
    }
}

pub fn run_all(cfg: &SuiteConfig) -> Result<Vec<SuiteReport>, HarnessError> {
    SuiteName::ALL.into_iter().map(|n| run_suite(n, cfg)).collect()
}

/// A failed check on one state, with everything needed to re-run it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationRecord {
    pub label: String,
    pub check: Check,
    pub finding: Finding,
    pub state: StateFile,
}

impl ViolationRecord {
    /// Re-run the check on the stored state.
    pub fn replay(&self, tol: &TolerancePolicy) -> Result<Vec<Finding>, HarnessError> {
        let psi = self.state.clone().into_state()?;
        Ok(run_check(&self.check, &psi, tol)?.findings)
    }
}

/// One named row of a suite (census rows, monoid products, named witnesses).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub label: String,
    pub triple: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    pub ok: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub suite: String,
    pub master_seed: u64,
    pub prng: String,
    pub tolerance: TolerancePolicy,
    pub samples: usize,
    /// States where a conditional check's hypothesis did not hold.
    pub hypothesis_not_met: usize,
    pub violation_count: usize,
    pub boundary_count: usize,
    pub violations: Vec<ViolationRecord>,
    /// Failures whose margins sit within the boundary factor of a threshold.
    pub boundary_cases: Vec<ViolationRecord>,
    /// Suite-level assertions that failed (not tied to one state).
    pub suite_failures: Vec<String>,
    /// Classified triples and how often each occurred.
    pub observed_triples: BTreeMap<String, usize>,
    pub entries: Vec<Entry>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn new(suite: SuiteName, cfg: &SuiteConfig) -> Self {
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            suite: suite.to_string(),
            master_seed: cfg.seed,
            prng: PRNG_ALGORITHM.to_string(),
            tolerance: cfg.tolerance,
            samples: 0,
            hypothesis_not_met: 0,
            violation_count: 0,
            boundary_count: 0,
            violations: Vec::new(),
            boundary_cases: Vec::new(),
            suite_failures: Vec::new(),
            observed_triples: BTreeMap::new(),
            entries: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violation_count == 0 && self.suite_failures.is_empty()
    }

    /// Run `checks` on one state, record its triple and any findings.
    /// Returns the evaluation for suite-level bookkeeping.
    pub fn examine(&mut self, label: &str, psi: &PureState3, checks: &[Check]) -> Result<Evaluated, HarnessError> {
        let tol = self.tolerance;
        let ev = Evaluated::of(psi, &tol)?;
        self.samples += 1;
        *self.observed_triples.entry(ev.triple.to_string()).or_default() += 1;
        for check in checks {
            let out = apply(check, psi, &ev, &tol)?;
            if !out.applicable {
                self.hypothesis_not_met += 1;
            }
            for finding in out.findings {
                let record = ViolationRecord {
                    label: label.to_string(),
                    check: check.clone(),
                    finding,
                    state: StateFile::from_state(psi),
                };
                if record.finding.boundary {
                    self.boundary_count += 1;
                    self.boundary_cases.push(record);
                } else {
                    self.violation_count += 1;
                    self.violations.push(record);
                }
            }
        }
        Ok(ev)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Triples observed in this report.
    pub fn triples(&self) -> impl Iterator<Item = (ClassTriple, usize)> + '_ {
        self.observed_triples
            .iter()
            .filter_map(|(k, v)| ClassTriple::parse(k).map(|t| (t, *v)))
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        writeln!(
            f,
            "[{status}] {}: {} samples, {} violations, {} boundary cases, {} hypothesis-not-met (seed {})",
            self.suite,
            self.samples,
            self.violation_count,
            self.boundary_count,
            self.hypothesis_not_met,
            self.master_seed
        )?;
        if !self.observed_triples.is_empty() {
            let listed: Vec<String> = self.observed_triples.iter().map(|(k, v)| format!("{k}:{v}")).collect();
            writeln!(f, "  triples: {}", listed.join(" "))?;
        }
        for e in &self.entries {
            let mark = if e.ok { "ok " } else { "BAD" };
            let expected = e
                .expected
                .as_deref()
                .map(|x| format!(" (expected {x})"))
                .unwrap_or_default();
            let detail = if e.detail.is_empty() {
                String::new()
            } else {
                format!("  {}", e.detail)
            };
            writeln!(f, "  {mark} {:<28} {}{expected}{detail}", e.label, e.triple)?;
        }
        for v in self.violations.iter().take(10) {
            writeln!(f, "  violation [{}] {}: {}", v.check.name(), v.label, v.finding.message)?;
        }
        if self.violations.len() > 10 {
            writeln!(f, "  ... {} more violations", self.violations.len() - 10)?;
        }
        for s in &self.suite_failures {
            writeln!(f, "  suite failure: {s}")?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}
