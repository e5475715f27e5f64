//! Argument parsing and report rendering for the `qecc-bounds` binary.
//!
//! [`run`] takes the full argv and two sinks and returns the process exit
//! code: 0 when everything checked holds, 1 when a bound or verification
//! fails, 2 for usage and input errors.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use qhb_core::bounds::{css_feasibility, qhb_check, quantum_singleton_check, BoundVerdict, QuantumParams};
use qhb_core::codes::{LinearCode, WorkBudget};
use qhb_core::css::{css_params, derive_auxiliary, verify_derived, CodeSummary, CssPair, DerivationReport};
use qhb_core::scan::{
    check_realized, classify, oracle_exhaustive_css, scan_range_streaming, scan_range_timed, AssertionFailure,
    Classification, OracleConfig, OracleReport, ScanConfig, ScanReport, SCHEMA_VERSION,
};
use qhb_core::threshold::{table1, threshold_for, Table1Row, ThresholdRecord};
use qhb_core::{CodeMatrix, Error, Fixed};
use serde::{Deserialize, Serialize};

pub const BUDGET_ENV: &str = "QECC_BOUNDS_BUDGET";

#[derive(Debug, Parser)]
#[command(
    name = "qecc-bounds",
    version,
    about = "Exact bounds and CSS constructions for quantum codes"
)]
struct Cli {
    /// Output format; `table1` defaults to tsv, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Maximum codewords enumerated per brute-force step.
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
    Human,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate every bound for one parameter set and classify it.
    Check(CheckArgs),
    /// Build the CSS code of a nested pair and check it against the bounds.
    CssVerify(PairArgs),
    /// Derive the two auxiliary classical codes of a nested pair.
    Derive(DeriveArgs),
    /// Classify every parameter set in a range.
    Scan(ScanArgs),
    /// Construct CSS codes from all (or sampled) nested pairs and check them.
    Oracle(OracleArgs),
    /// Print the threshold table for q = 3..11.
    Table1,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(long)]
    n: u32,
    /// log_q of the code dimension.
    #[arg(long, conflicts_with = "dimension", required_unless_present = "dimension")]
    k: Option<u32>,
    /// Code dimension K as a decimal integer.
    #[arg(long = "K", id = "dimension")]
    dimension: Option<String>,
    #[arg(long)]
    d: u32,
    #[arg(long)]
    q: u32,
    #[arg(long)]
    css: bool,
}

#[derive(Debug, Args)]
struct PairArgs {
    /// Generator matrix of the inner code C1.
    c1: PathBuf,
    /// Generator matrix of the outer code C2.
    c2: PathBuf,
}

#[derive(Debug, Args)]
struct DeriveArgs {
    #[command(flatten)]
    pair: PairArgs,
    #[arg(long)]
    out_d: Option<PathBuf>,
    #[arg(long)]
    out_dprime: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long)]
    n_max: u32,
    /// Comma-separated alphabet sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    q: Vec<u32>,
    #[arg(long)]
    css: bool,
    #[arg(long)]
    d_max: Option<u32>,
    /// Stream open parameter sets to this file as JSON lines.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Record wall-clock time in the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[arg(long, default_value_t = 2)]
    q: u32,
    #[arg(long)]
    n_max: u32,
    /// Pairs drawn per length beyond the exhaustive range.
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// A failure that maps to exit code 2.
#[derive(Debug)]
struct UsageError(String);

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError(e.to_string())
    }
}

impl From<io::Error> for UsageError {
    fn from(e: io::Error) -> Self {
        UsageError(e.to_string())
    }
}

type Outcome = std::result::Result<bool, UsageError>;

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let msg = e.to_string();
            let line: Vec<&str> = msg
                .lines()
                .map(str::trim)
                .take_while(|l| !l.starts_with("Usage:") && !l.starts_with("For more information"))
                .filter(|l| !l.is_empty())
                .collect();
            let _ = writeln!(err, "{}", line.join(" "));
            return 2;
        }
    };
    match dispatch(&cli, out) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(UsageError(msg)) => {
            let _ = writeln!(err, "error: {}", msg.replace('\n', " "));
            2
        }
    }
}

fn budget(cli: &Cli) -> std::result::Result<WorkBudget, UsageError> {
    if let Some(b) = cli.budget {
        return Ok(WorkBudget(b));
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(WorkBudget)
            .map_err(|_| UsageError(format!("{BUDGET_ENV} must be a non-negative integer, got {v:?}"))),
        Err(_) => Ok(WorkBudget::DEFAULT),
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Outcome {
    let fmt = cli.format.unwrap_or(match cli.command {
        Command::Table1 => Format::Tsv,
        _ => Format::Json,
    });
    let budget = budget(cli)?;
    match &cli.command {
        Command::Check(a) => check(a, fmt, out),
        Command::CssVerify(a) => css_verify(a, budget, fmt, out),
        Command::Derive(a) => derive(a, budget, fmt, out),
        Command::Scan(a) => scan(a, fmt, out),
        Command::Oracle(a) => oracle(a, budget, fmt, out),
        Command::Table1 => {
            print_table1(&table1(), fmt, out)?;
            Ok(true)
        }
    }
}

fn emit_json<T: Serialize>(value: &T, out: &mut dyn Write) -> std::result::Result<(), UsageError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| UsageError(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn verdict_line(v: &BoundVerdict) -> String {
    if !v.applicable {
        return format!("{}: not applicable ({})", v.bound.label(), v.note);
    }
    let status = if v.satisfied { "OK" } else { "FAIL" };
    let eq = if v.meets { " (equality)" } else { "" };
    format!("{}: {} ≤ {} : {status}{eq}", v.bound.label(), v.lhs, v.rhs)
}

fn verdict_row(v: &BoundVerdict) -> String {
    format!(
        "{}\t{}\t{}\t{}\t{}\t{}",
        v.bound.label(),
        v.applicable,
        v.satisfied,
        v.meets,
        v.lhs,
        v.rhs
    )
}

const VERDICT_HEADER: &str = "bound\tapplicable\tsatisfied\tmeets\tlhs\trhs";

// --- check ------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub schema_version: u32,
    pub params: QuantumParams,
    /// Exact bounds in the order they are usually stated.
    pub bounds: Vec<BoundVerdict>,
    pub threshold: ThresholdRecord,
    pub classification: Classification,
}

impl CheckReport {
    pub fn all_satisfied(&self) -> bool {
        self.bounds.iter().all(|v| !v.violated())
    }
}

pub fn check_report(p: &QuantumParams) -> CheckReport {
    let mut bounds = vec![qhb_check(p), quantum_singleton_check(p)];
    if p.css() {
        if let Some(k) = p.k() {
            for v in css_feasibility(p.n(), k, p.d(), p.q()).verdicts {
                if !bounds.iter().any(|b| b.bound == v.bound) {
                    bounds.push(v);
                }
            }
        }
    }
    CheckReport {
        schema_version: SCHEMA_VERSION,
        params: p.clone(),
        bounds,
        threshold: threshold_for::<Fixed>(p).record(),
        classification: classify(p),
    }
}

fn check(a: &CheckArgs, fmt: Format, out: &mut dyn Write) -> Outcome {
    let p = match (&a.k, &a.dimension) {
        (Some(k), _) => QuantumParams::new(a.n, *k, a.d, a.q)?,
        (None, Some(dim)) => {
            let dim = dim
                .trim()
                .parse()
                .map_err(|_| UsageError(format!("--K must be a positive integer, got {dim:?}")))?;
            QuantumParams::from_dimension(a.n, dim, a.d, a.q)?
        }
        (None, None) => return Err(UsageError("one of --k or --K is required".into())),
    }
    .with_css(a.css);
    let report = check_report(&p);
    match fmt {
        Format::Json => emit_json(&report, out)?,
        Format::Human => {
            writeln!(out, "{}{}", report.params, if p.css() { " (CSS)" } else { "" })?;
            for v in &report.bounds {
                writeln!(out, "{}", verdict_line(v))?;
            }
            writeln!(
                out,
                "threshold condition: {:?}, margin {}",
                report.threshold.applies, report.threshold.margin
            )?;
            writeln!(out, "category: {}", report.classification.category.name())?;
        }
        Format::Tsv => {
            writeln!(out, "{VERDICT_HEADER}")?;
            for v in &report.bounds {
                writeln!(out, "{}", verdict_row(v))?;
            }
            writeln!(out, "category\t{}", report.classification.category.name())?;
        }
    }
    Ok(report.all_satisfied())
}

// --- css-verify / derive ------------------------------------------------------

fn read_code(path: &Path) -> std::result::Result<LinearCode, UsageError> {
    let text = fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    let m = CodeMatrix::from_text(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    Ok(LinearCode::from_generator(&m))
}

/// Builds the pair; `Ok(None)` when the codes are compatible but not strictly nested.
fn read_pair(a: &PairArgs, budget: WorkBudget) -> std::result::Result<Option<CssPair>, UsageError> {
    let c1 = read_code(&a.c1)?;
    let c2 = read_code(&a.c2)?;
    if c1.field() != c2.field() || c1.len() != c2.len() {
        return Err(UsageError(format!(
            "codes differ in field or length: GF({})^{} vs GF({})^{}",
            c1.field().order(),
            c1.len(),
            c2.field().order(),
            c2.len()
        )));
    }
    match CssPair::new(c1, c2, budget) {
        Ok(pair) => Ok(Some(pair)),
        Err(Error::NotStrictSubcode) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CssVerifyReport {
    pub schema_version: u32,
    pub nested: bool,
    pub params: Option<QuantumParams>,
    pub coset_weights: Option<(usize, usize)>,
    pub bounds: Vec<BoundVerdict>,
    pub derivation: Option<DerivationReport>,
    pub failures: Vec<AssertionFailure>,
    pub passed: bool,
}

fn css_verify(a: &PairArgs, budget: WorkBudget, fmt: Format, out: &mut dyn Write) -> Outcome {
    let report = match read_pair(a, budget)? {
        None => CssVerifyReport {
            schema_version: SCHEMA_VERSION,
            nested: false,
            params: None,
            coset_weights: None,
            bounds: Vec::new(),
            derivation: None,
            failures: vec![AssertionFailure {
                params: String::new(),
                assertion: "nested".into(),
                detail: "C1 is not a strict subcode of C2".into(),
            }],
            passed: false,
        },
        Some(pair) => {
            let params = css_params(&pair)?;
            let derived = derive_auxiliary(&pair)?;
            let derivation = verify_derived(&pair, &derived, budget)?;
            let failures = check_realized(&params, &derivation);
            CssVerifyReport {
                schema_version: SCHEMA_VERSION,
                nested: true,
                coset_weights: Some(pair.coset_weights()),
                bounds: check_report(&params).bounds,
                params: Some(params),
                derivation: Some(derivation),
                passed: failures.is_empty(),
                failures,
            }
        }
    };
    match fmt {
        Format::Json => emit_json(&report, out)?,
        Format::Human => {
            match &report.params {
                Some(p) => writeln!(out, "{p}")?,
                None => writeln!(out, "not a nested pair")?,
            }
            for v in &report.bounds {
                writeln!(out, "{}", verdict_line(v))?;
            }
            for f in &report.failures {
                writeln!(out, "FAIL {}: {}", f.assertion, f.detail)?;
            }
            writeln!(out, "{}", if report.passed { "PASS" } else { "FAIL" })?;
        }
        Format::Tsv => {
            writeln!(out, "{VERDICT_HEADER}")?;
            for v in &report.bounds {
                writeln!(out, "{}", verdict_row(v))?;
            }
            for f in &report.failures {
                writeln!(out, "failure\t{}\t{}", f.assertion, f.detail)?;
            }
            writeln!(out, "passed\t{}", report.passed)?;
        }
    }
    Ok(report.passed)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeriveReport {
    pub schema_version: u32,
    pub params: QuantumParams,
    pub d: CodeSummary,
    pub d_prime: CodeSummary,
    /// Column order that brings C2 to block form.
    pub permutation: Vec<usize>,
    /// Column order that brings the dual of C1 to block form.
    pub dual_permutation: Vec<usize>,
    pub d_generator: String,
    pub d_prime_generator: String,
    pub holds: bool,
}

fn derive(a: &DeriveArgs, budget: WorkBudget, fmt: Format, out: &mut dyn Write) -> Outcome {
    let Some(pair) = read_pair(&a.pair, budget)? else {
        return Err(UsageError("C1 is not a strict subcode of C2".into()));
    };
    let derived = derive_auxiliary(&pair)?;
    let check = verify_derived(&pair, &derived, budget)?;
    let report = DeriveReport {
        schema_version: SCHEMA_VERSION,
        params: css_params(&pair)?,
        d: check.derived.clone(),
        d_prime: check.derived_prime.clone(),
        permutation: derived.primal.permutation.clone(),
        dual_permutation: derived.dual.permutation.clone(),
        d_generator: derived.d.to_text(),
        d_prime_generator: derived.d_prime.to_text(),
        holds: check.auxiliary_holds,
    };
    if let Some(path) = &a.out_d {
        fs::write(path, &report.d_generator)?;
    }
    if let Some(path) = &a.out_dprime {
        fs::write(path, &report.d_prime_generator)?;
    }
    let summary = |c: &CodeSummary| format!("[{}, {}, {}]", c.length, c.dimension, c.min_weight);
    match fmt {
        Format::Json => emit_json(&report, out)?,
        Format::Human => {
            writeln!(out, "{}", report.params)?;
            writeln!(out, "D  = {}", summary(&report.d))?;
            writeln!(out, "D' = {}", summary(&report.d_prime))?;
            writeln!(out, "{}", if report.holds { "PASS" } else { "FAIL" })?;
        }
        Format::Tsv => {
            writeln!(out, "code\tlength\tdimension\tmin_weight")?;
            for (name, c) in [("D", &report.d), ("D'", &report.d_prime)] {
                writeln!(out, "{name}\t{}\t{}\t{}", c.length, c.dimension, c.min_weight)?;
            }
            writeln!(out, "holds\t{}", report.holds)?;
        }
    }
    Ok(report.holds)
}

// --- scan / oracle ------------------------------------------------------------

fn scan(a: &ScanArgs, fmt: Format, out: &mut dyn Write) -> Outcome {
    let cfg = ScanConfig {
        n_max: a.n_max,
        q_list: a.q.clone(),
        css: a.css,
        d_max: a.d_max,
    };
    let mut sink = match &a.output {
        Some(path) => Some(io::BufWriter::new(fs::File::create(path)?)),
        None => None,
    };
    let mut write_err: Option<io::Error> = None;
    let on_open = |p: &QuantumParams| {
        if let (Some(w), None) = (sink.as_mut(), write_err.as_ref()) {
            let line = serde_json::to_string(p).expect("parameters serialise");
            if let Err(e) = writeln!(w, "{line}") {
                write_err = Some(e);
            }
        }
    };
    let report: ScanReport = if a.timing {
        scan_range_timed(&cfg, on_open)?
    } else {
        scan_range_streaming(&cfg, on_open)?
    };
    if let Some(e) = write_err {
        return Err(e.into());
    }
    if let Some(mut w) = sink {
        w.flush()?;
    }
    match fmt {
        Format::Json => emit_json(&report, out)?,
        Format::Human => {
            writeln!(out, "{} parameter sets", report.total)?;
            for (cat, count) in &report.counts {
                writeln!(out, "{:<28} {count}", cat.name())?;
            }
            for p in &report.open {
                writeln!(out, "open: {p}")?;
            }
        }
        Format::Tsv => {
            writeln!(out, "category\tcount")?;
            for (cat, count) in &report.counts {
                writeln!(out, "{}\t{count}", cat.name())?;
            }
        }
    }
    Ok(true)
}

fn oracle(a: &OracleArgs, budget: WorkBudget, fmt: Format, out: &mut dyn Write) -> Outcome {
    let cfg = OracleConfig {
        q: a.q,
        n_max: a.n_max,
        samples: a.samples,
        seed: a.seed,
        budget: budget.0,
    };
    let report: OracleReport = oracle_exhaustive_css(&cfg)?;
    match fmt {
        Format::Json => emit_json(&report, out)?,
        Format::Human => {
            writeln!(
                out,
                "{} pairs checked, {} skipped, exhaustive n <= {}",
                report.pairs_checked,
                report.pairs_skipped,
                report.exhaustive_lengths.last().copied().unwrap_or(0)
            )?;
            for f in &report.failures {
                writeln!(out, "FAIL {} {}: {}", f.params, f.assertion, f.detail)?;
            }
            writeln!(out, "{}", if report.passed() { "PASS" } else { "FAIL" })?;
        }
        Format::Tsv => {
            writeln!(out, "n\tk\td\tpairs")?;
            for r in &report.realized {
                writeln!(out, "{}\t{}\t{}\t{}", r.n, r.k, r.d, r.pairs)?;
            }
        }
    }
    Ok(report.passed())
}

// --- table1 -------------------------------------------------------------------

fn print_table1(rows: &[Table1Row], fmt: Format, out: &mut dyn Write) -> std::result::Result<(), UsageError> {
    match fmt {
        Format::Json => emit_json(&rows, out)?,
        Format::Tsv => {
            let join = |f: &dyn Fn(&Table1Row) -> String| rows.iter().map(f).collect::<Vec<_>>().join("\t");
            writeln!(out, "q\t{}", join(&|r| r.q.to_string()))?;
            writeln!(out, "delta\t{}", join(&|r| r.delta()))?;
            writeln!(out, "1-delta\t{}", join(&|r| r.one_minus_delta()))?;
        }
        Format::Human => {
            writeln!(out, "{:>4}  {:>6}  {:>7}", "q", "δ", "1 − δ")?;
            for r in rows {
                writeln!(out, "{:>4}  {:>6}  {:>7}", r.q, r.delta(), r.one_minus_delta())?;
            }
        }
    }
    Ok(())
}
