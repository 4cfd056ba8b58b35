//! Command-line front end. `main_with_args` parses, runs and maps errors to
//! exit codes; the binary is a one-line wrapper around it.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::classify::{
    canonical_triple, check_table1_consistency, classify_state, converse_monogamy_holds, in_known_subsets, ClassTriple,
    RankEffort, RankProfile, TableCheck,
};
use crate::criteria::{hierarchy_audit, CriteriaError, CriteriaReport};
use crate::harness::{run_all, run_suite, HarnessError, SuiteConfig, SuiteName, SuiteReport, SuiteSizes};
use crate::io::{read_state, write_state, IoError, StateFile};
use crate::linalg::{LinalgError, Spectrum, C64};
use crate::states::{
    direct_sum_product, ghz, haar_random, mc_state, psi_a, purify_separable_bc_with, rnn_boundary, rrr_symmetric,
    schmidt_family, tiles_pnn, w_state, BcTermBasis, Pair, Party, Provenance, PureState3, StateError, DEFAULT_WEIGHT,
    PRNG_ALGORITHM,
};
use crate::tolerance::TolerancePolicy;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;
pub const EXIT_SUITE_FAILURE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "tripartite",
    version,
    about = "Entanglement classes of the reductions of tripartite pure states"
)]
pub struct Cli {
    /// Master seed for random constructions, sweeps and suites.
    #[arg(long, global = true, default_value_t = 2026)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Exit with code 2 when a classification has an S|P slot.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Multiply every tolerance threshold by this factor.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub tol_scale: f64,
    /// ALS restarts per rank in the tensor-rank search; 0 disables the search.
    #[arg(long, global = true, default_value_t = 32)]
    pub effort: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a state from a named family and write it as JSON.
    Construct(ConstructArgs),
    /// Classify the three reductions of a stored state.
    Classify { input: PathBuf },
    /// Classify Haar-random states and tabulate the triples.
    Sweep {
        /// Local dimensions, e.g. 2,2,2.
        #[arg(long, value_delimiter = ',', default_values_t = [2usize, 2, 2])]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 1000)]
        n: usize,
    },
    /// Run a verification suite, or all of them.
    Verify {
        /// hierarchy, theorem1, theorem2, monogamy, thapliyal, lemma4, monoid, census, slocc or all.
        suite: String,
        /// Small ensembles.
        #[arg(long)]
        quick: bool,
    },
    /// Direct-sum product of two stored states.
    Product {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, default_value_t = DEFAULT_WEIGHT)]
        weight: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Dimensions, norm, provenance and spectra of a stored state.
    Inspect { input: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Ghz,
    Mc,
    Schmidt,
    W,
    RnnBoundary,
    RrrSymmetric,
    PsiA,
    Haar,
    PurifiedSepBc,
    PnnTiles,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    pub family: Family,
    /// Local dimension (ghz, rnn-boundary).
    #[arg(long)]
    pub d: Option<usize>,
    /// Number of terms (rrr-symmetric, psi-a).
    #[arg(long)]
    pub r: Option<usize>,
    /// Local dimensions (haar).
    #[arg(long, value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,
    /// Weights p_i, comma separated (mc, schmidt).
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<f64>>,
    /// Vectors separated by ';', entries by ','; complex entries as re:im.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
    /// purified-sep-bc: dimension of B.
    #[arg(long)]
    pub d_b: Option<usize>,
    /// purified-sep-bc: dimension of C.
    #[arg(long)]
    pub d_c: Option<usize>,
    /// purified-sep-bc: number of product terms in ρ_BC.
    #[arg(long)]
    pub terms: Option<usize>,
    /// purified-sep-bc: draw the c_i orthonormal.
    #[arg(long)]
    pub orthonormal_c: bool,
    /// Write here instead of stdout.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Criteria(#[from] CriteriaError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Harness(#[from] HarnessError),
    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    match run(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    if !(cli.tol_scale.is_finite() && cli.tol_scale > 0.0) {
        return Err(CliError::Usage(format!(
            "--tol-scale must be positive, got {}",
            cli.tol_scale
        )));
    }
    let tol = TolerancePolicy::default().scaled(cli.tol_scale);
    match &cli.command {
        Command::Construct(args) => {
            let psi = construct(args, cli.seed)?;
            match &args.output {
                Some(path) => {
                    write_state(path, &psi)?;
                    let prov = psi
                        .provenance()
                        .map(|p| serde_json::to_string(p).expect("provenance serializes"));
                    writeln!(out, "wrote {} dims {:?}", path.display(), psi.dims())?;
                    if let Some(p) = prov {
                        writeln!(out, "provenance {p}")?;
                    }
                }
                None => writeln!(out, "{}", StateFile::from_state(&psi).to_json())?,
            }
            Ok(EXIT_OK)
        }
        Command::Classify { input } => {
            let psi = read_state(input)?;
            let view = classification(&psi, &tol, &effort(cli))?;
            match cli.format {
                Format::Json => writeln!(out, "{}", to_json(&view))?,
                Format::Text => write!(out, "{}", view.render())?,
            }
            Ok(if cli.strict && !view.triple.is_decided() {
                EXIT_UNDECIDED
            } else {
                EXIT_OK
            })
        }
        Command::Sweep { dims, n } => {
            if *n == 0 {
                return Err(CliError::Usage("--n must be at least 1".into()));
            }
            let dims: [usize; 3] = dims
                .as_slice()
                .try_into()
                .map_err(|_| CliError::Usage("--dims takes 3 values".into()))?;
            let report = sweep(dims, *n, cli.seed, &tol)?;
            match cli.format {
                Format::Json => writeln!(out, "{}", to_json(&report))?,
                Format::Text => write!(out, "{}", report.render())?,
            }
            let failed = report.monogamy_violations + report.hierarchy_violations > 0;
            Ok(if failed {
                EXIT_SUITE_FAILURE
            } else if cli.strict && report.undecided > 0 {
                EXIT_UNDECIDED
            } else {
                EXIT_OK
            })
        }
        Command::Verify { suite, quick } => {
            let mut cfg = SuiteConfig::new(cli.seed).with_tolerance(tol);
            if *quick {
                cfg = cfg.with_sizes(SuiteSizes::smoke());
            }
            let reports = if suite == "all" {
                run_all(&cfg)?
            } else {
                vec![run_suite(suite.parse::<SuiteName>()?, &cfg)?]
            };
            match cli.format {
                Format::Json if reports.len() == 1 => writeln!(out, "{}", reports[0].to_json())?,
                Format::Json => writeln!(out, "{}", to_json(&reports))?,
                Format::Text => {
                    for r in &reports {
                        write!(out, "{r}")?;
                    }
                }
            }
            Ok(if reports.iter().all(SuiteReport::passed) {
                EXIT_OK
            } else {
                EXIT_SUITE_FAILURE
            })
        }
        Command::Product {
            left,
            right,
            weight,
            output,
        } => {
            let psi = direct_sum_product(&read_state(left)?, &read_state(right)?, *weight)?;
            match output {
                Some(path) => {
                    write_state(path, &psi)?;
                    writeln!(out, "wrote {} dims {:?}", path.display(), psi.dims())?;
                }
                None => writeln!(out, "{}", StateFile::from_state(&psi).to_json())?,
            }
            Ok(EXIT_OK)
        }
        Command::Inspect { input } => {
            let view = inspect(&read_state(input)?, &tol)?;
            match cli.format {
                Format::Json => writeln!(out, "{}", to_json(&view))?,
                Format::Text => write!(out, "{}", view.render())?,
            }
            Ok(EXIT_OK)
        }
    }
}

fn effort(cli: &Cli) -> RankEffort {
    if cli.effort == 0 {
        RankEffort::none()
    } else {
        RankEffort {
            restarts: cli.effort,
            seed: cli.seed,
            ..RankEffort::default()
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize")
}

fn need<T>(value: Option<T>, flag: &str, family: Family) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("{family:?} needs --{flag}").to_lowercase()))
}

fn parse_number(s: &str) -> Result<C64, CliError> {
    let bad = || CliError::Usage(format!("cannot parse vector entry {s:?}"));
    let s = s.trim();
    match s.split_once(':') {
        Some((re, im)) => Ok(C64::new(
            re.trim().parse().map_err(|_| bad())?,
            im.trim().parse().map_err(|_| bad())?,
        )),
        None => Ok(C64::new(s.parse().map_err(|_| bad())?, 0.0)),
    }
}

/// "1,0;0.6,0.8" → two vectors in C^2.
pub fn parse_vectors(text: &str) -> Result<Vec<Vec<C64>>, CliError> {
    text.split(';')
        .map(|v| v.split(',').map(parse_number).collect())
        .collect()
}

pub fn construct(args: &ConstructArgs, seed: u64) -> Result<PureState3, CliError> {
    let f = args.family;
    let vectors = |flag: &str, v: &Option<String>| need(v.as_deref(), flag, f).and_then(parse_vectors);
    Ok(match f {
        Family::Ghz => ghz(need(args.d, "d", f)?)?,
        Family::Mc => mc_state(&need(args.p.clone(), "p", f)?, &vectors("b", &args.b)?)?,
        Family::Schmidt => schmidt_family(
            &need(args.p.clone(), "p", f)?,
            &vectors("a", &args.a)?,
            &vectors("b", &args.b)?,
            &vectors("c", &args.c)?,
        )?,
        Family::W => w_state(),
        Family::RnnBoundary => rnn_boundary(need(args.d, "d", f)?)?,
        Family::RrrSymmetric => rrr_symmetric(need(args.r, "r", f)?)?,
        Family::PsiA => psi_a(need(args.r, "r", f)?)?,
        Family::Haar => {
            let dims: [usize; 3] = need(args.dims.clone(), "dims", f)?
                .try_into()
                .map_err(|_| CliError::Usage("--dims takes 3 values".into()))?;
            if dims.contains(&0) {
                return Err(CliError::Usage("dimensions must be positive".into()));
            }
            haar_random(dims, seed)
        }
        Family::PurifiedSepBc => {
            let basis = if args.orthonormal_c {
                BcTermBasis::OrthonormalC
            } else {
                BcTermBasis::Random
            };
            purify_separable_bc_with(
                need(args.d_b, "d-b", f)?,
                need(args.d_c, "d-c", f)?,
                need(args.terms, "terms", f)?,
                seed,
                basis,
            )?
        }
        Family::PnnTiles => tiles_pnn(),
    })
}

#[derive(Debug, Serialize)]
pub struct PairView {
    pub pair: Pair,
    pub class: char,
    pub report: CriteriaReport,
}

#[derive(Debug, Serialize)]
pub struct ClassificationView {
    pub schema_version: u32,
    pub dims: [usize; 3],
    pub triple: ClassTriple,
    pub triple_text: String,
    /// Canonical subset, or the candidate subsets of an undecided triple.
    pub subsets: Vec<String>,
    pub known_subsets: bool,
    pub pairs: Vec<PairView>,
    pub ranks: RankProfile,
    pub table: Option<TableCheck>,
    pub table_note: Option<String>,
    pub hierarchy_inversions: usize,
    pub tolerance: TolerancePolicy,
    pub prng: String,
}

pub fn classification(
    psi: &PureState3,
    tol: &TolerancePolicy,
    effort: &RankEffort,
) -> Result<ClassificationView, CliError> {
    let c = classify_state(psi, tol, effort)?;
    let subsets = match canonical_triple(&c.triple) {
        Ok(canon) => vec![canon.subset.to_string()],
        Err(_) => crate::classify::candidates(&c.triple)
            .iter()
            .map(|x| x.subset.to_string())
            .collect(),
    };
    let (table, table_note) = match check_table1_consistency(&c.triple, &c.ranks) {
        Ok(t) => (Some(t), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let hierarchy_inversions = c.reports.iter().map(|r| hierarchy_audit(r, tol).len()).sum();
    Ok(ClassificationView {
        schema_version: crate::harness::REPORT_SCHEMA_VERSION,
        dims: psi.dims(),
        triple: c.triple,
        triple_text: c.triple.to_string(),
        subsets,
        known_subsets: in_known_subsets(&c.triple),
        pairs: Pair::ALL
            .into_iter()
            .map(|p| PairView {
                pair: p,
                class: c.triple.get(p).letter(),
                report: c.report(p).clone(),
            })
            .collect(),
        ranks: c.ranks,
        table,
        table_note,
        hierarchy_inversions,
        tolerance: *tol,
        prng: PRNG_ALGORITHM.to_string(),
    })
}

impl ClassificationView {
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}", self.triple_text);
        let _ = writeln!(s, "  dims {:?}, subset {}", self.dims, self.subsets.join("/"));
        for p in &self.pairs {
            let r = &p.report;
            let _ = writeln!(
                s,
                "  {:?} {}  ppt {:+.3e}  reduction {:+.3e}  majorization {:+.3e}  cond-entropy {:+.3e}  rank {} (local {:?})  {:?}",
                p.pair,
                p.class,
                r.ppt.min_eigenvalue,
                r.reduction.margin(),
                r.majorization.margin(),
                r.cond_entropy.min(),
                r.ranks.rank,
                r.ranks.local_ranks,
                r.separability,
            );
        }
        let rk = &self.ranks;
        let span = if rk.exact {
            format!("{}", rk.upper)
        } else {
            format!("[{}, {}]", rk.lower, rk.upper)
        };
        let _ = writeln!(
            s,
            "  tensor rank {span} ({:?}), local ranks {:?}",
            rk.source, rk.local_ranks
        );
        match (&self.table, &self.table_note) {
            (Some(t), _) => {
                let _ = writeln!(
                    s,
                    "  rank table {}: {}  {}",
                    t.subset,
                    if t.pass { "pass" } else { "FAIL" },
                    t.detail
                );
            }
            (None, Some(note)) => {
                let _ = writeln!(s, "  rank table: {note}");
            }
            _ => {}
        }
        if self.hierarchy_inversions > 0 {
            let _ = writeln!(s, "  WARNING: {} criteria-chain inversions", self.hierarchy_inversions);
        }
        s
    }
}

#[derive(Debug, Serialize)]
pub struct SweepReport {
    pub schema_version: u32,
    pub dims: [usize; 3],
    pub samples: usize,
    pub master_seed: u64,
    pub prng: String,
    pub tolerance: TolerancePolicy,
    pub triples: BTreeMap<String, usize>,
    /// Counts per canonical subset; undecided triples count under "S|P".
    pub subsets: BTreeMap<String, usize>,
    pub undecided: usize,
    pub monogamy_violations: usize,
    pub hierarchy_violations: usize,
}

pub fn sweep(dims: [usize; 3], n: usize, seed: u64, tol: &TolerancePolicy) -> Result<SweepReport, CliError> {
    if dims.contains(&0) {
        return Err(CliError::Usage("dimensions must be positive".into()));
    }
    let mut report = SweepReport {
        schema_version: crate::harness::REPORT_SCHEMA_VERSION,
        dims,
        samples: n,
        master_seed: seed,
        prng: PRNG_ALGORITHM.to_string(),
        tolerance: *tol,
        triples: BTreeMap::new(),
        subsets: BTreeMap::new(),
        undecided: 0,
        monogamy_violations: 0,
        hierarchy_violations: 0,
    };
    for i in 0..n {
        let psi = haar_random(dims, seed ^ i as u64);
        let (reports, triple) = crate::classify::classify_reports(&psi, tol)?;
        *report.triples.entry(triple.to_string()).or_default() += 1;
        let subset = canonical_triple(&triple)
            .map(|c| c.subset.to_string())
            .unwrap_or_else(|_| "S|P".into());
        *report.subsets.entry(subset).or_default() += 1;
        if !triple.is_decided() {
            report.undecided += 1;
        }
        if !(in_known_subsets(&triple) && converse_monogamy_holds(&triple)) {
            report.monogamy_violations += 1;
        }
        report.hierarchy_violations += reports
            .iter()
            .flat_map(|r| hierarchy_audit(r, tol))
            .filter(|v| !v.boundary)
            .count();
    }
    Ok(report)
}

impl SweepReport {
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "sweep dims {:?}, {} samples, seed {}: {} converse-monogamy violations, {} chain inversions",
            self.dims, self.samples, self.master_seed, self.monogamy_violations, self.hierarchy_violations
        );
        for (t, c) in &self.triples {
            let _ = writeln!(s, "  {t}  {c}");
        }
        let listed: Vec<String> = self.subsets.iter().map(|(k, v)| format!("{k}:{v}")).collect();
        let _ = writeln!(s, "  subsets: {}", listed.join(" "));
        s
    }
}

#[derive(Debug, Serialize)]
pub struct InspectView {
    pub dims: [usize; 3],
    pub norm: f64,
    pub provenance: Option<Provenance>,
    pub local_ranks: [usize; 3],
    /// Spectra of ρ_A, ρ_B, ρ_C.
    pub marginal_spectra: Vec<Vec<f64>>,
    /// Von Neumann entropies of ρ_A, ρ_B, ρ_C in bits.
    pub marginal_entropies: Vec<f64>,
    /// Spectra of ρ_AB, ρ_BC, ρ_CA (nonzero part, descending).
    pub pair_spectra: Vec<Vec<f64>>,
}

pub fn inspect(psi: &PureState3, tol: &TolerancePolicy) -> Result<InspectView, CliError> {
    let mut marginal_spectra = Vec::new();
    let mut marginal_entropies = Vec::new();
    for p in Party::ALL {
        let spec = Spectrum::of_density(&psi.marginal(p))?;
        marginal_entropies.push(spec.entropy_bits());
        marginal_spectra.push(spec.values().to_vec());
    }
    let mut pair_spectra = Vec::new();
    for p in Pair::ALL {
        let spec = Spectrum::of_density(&psi.reduced_density(p).matrix)?;
        let top = spec.values().first().copied().unwrap_or(0.0);
        pair_spectra.push(
            spec.values()
                .iter()
                .copied()
                .filter(|v| *v > tol.rank_relative * top)
                .collect(),
        );
    }
    Ok(InspectView {
        dims: psi.dims(),
        norm: psi.norm(),
        provenance: psi.provenance().cloned(),
        local_ranks: psi.local_ranks(tol.rank_relative),
        marginal_spectra,
        marginal_entropies,
        pair_spectra,
    })
}

impl InspectView {
    pub fn render(&self) -> String {
        let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>().join(" ");
        let mut s = String::new();
        let _ = writeln!(s, "dims {:?}, norm {:.15}", self.dims, self.norm);
        if let Some(p) = &self.provenance {
            let _ = writeln!(s, "provenance: {} {}", p.family, p.parameters);
            if let Some(k) = p.tensor_rank {
                let _ = writeln!(s, "  tensor rank {} {}", if k.exact { "=" } else { "<=" }, k.value);
            }
        }
        let _ = writeln!(s, "local ranks {:?}", self.local_ranks);
        for (i, p) in Party::ALL.into_iter().enumerate() {
            let _ = writeln!(
                s,
                "  rho_{p:?}: H = {:.6} bits, spectrum {}",
                self.marginal_entropies[i],
                fmt(&self.marginal_spectra[i])
            );
        }
        for (i, p) in Pair::ALL.into_iter().enumerate() {
            let _ = writeln!(s, "  rho_{p:?}: spectrum {}", fmt(&self.pair_spectra[i]));
        }
        s
    }
}
