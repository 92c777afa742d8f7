//! The `moments` command line.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 usage error,
//! 3 no closed form known. Values are always exact rational strings.

pub mod render;
pub mod verify;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::conjecture::{explore_d_even, search, ClosedFormCandidate, SearchConfig};
use crate::moments::corollaries::{lookup, printed_formulas, PrintedFormula};
use crate::moments::{evaluate, Family, Method, MomentError, MomentQuery};
use render::Record;
pub use verify::{run_verify, VerifyReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NO_CLOSED_FORM: i32 = 3;

/// Environment variable that overrides `--jobs`.
pub const JOBS_ENV: &str = "MOMENTS_JOBS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Latex,
    Markdown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// Resolved options shared by every subcommand. `m_max` is the largest power
/// of `k`; `jobs` only affects scheduling and is left out of reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub families: Vec<Family>,
    pub m_max: u32,
    pub n_max: i64,
    pub methods: Vec<Method>,
    pub format: Format,
    #[serde(skip)]
    pub jobs: usize,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            families: Family::ALL.to_vec(),
            m_max: 8,
            n_max: 30,
            methods: vec![Method::Oracle],
            format: Format::Json,
            jobs: 1,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.families.is_empty() {
            return Err(CliError::Usage("at least one family is required".into()));
        }
        if self.methods.is_empty() {
            return Err(CliError::Usage("at least one method is required".into()));
        }
        if self.n_max < 1 {
            return Err(CliError::Usage(format!(
                "--n-max must be >= 1, got {}",
                self.n_max
            )));
        }
        if self.jobs < 1 {
            return Err(CliError::Usage("--jobs must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    NoClosedForm(String),
    #[error("{0}")]
    Mismatch(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::NoClosedForm(_) => EXIT_NO_CLOSED_FORM,
            CliError::Mismatch(_) => EXIT_MISMATCH,
        }
    }
}

impl From<MomentError> for CliError {
    fn from(e: MomentError) -> Self {
        match e {
            MomentError::NoClosedFormKnown { .. } => CliError::NoClosedForm(e.to_string()),
            MomentError::FormsDisagree { .. } => CliError::Mismatch(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "moments",
    version,
    about = "Exact binomial moment sums: evaluate, verify, discover, tabulate"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Families to include, comma separated
    #[arg(long, value_delimiter = ',', default_value = "A,B,C,D")]
    pub families: Vec<Family>,
    /// Largest power of k
    #[arg(long, default_value_t = 8)]
    pub m_max: u32,
    /// Largest n (default 30; 40 for the open search)
    #[arg(long)]
    pub n_max: Option<i64>,
    /// Evaluation methods, comma separated (default oracle)
    #[arg(long, value_delimiter = ',')]
    pub methods: Vec<Method>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads; MOMENTS_JOBS takes precedence
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Seed for the randomized identity panels
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write output here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one moment FAMILY_M(N)
    Eval {
        family: Family,
        /// Power of k
        m: u32,
        n: i64,
        #[arg(default_value = "theorem")]
        method: Method,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Cross-check every evaluation route and identity
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// JSON formula table to check instead of the built-in one
        #[arg(long)]
        corollary_table: Option<PathBuf>,
        /// Also rediscover every tabulated formula from brute-force values
        #[arg(long)]
        rediscover: bool,
    },
    /// Fit closed forms for FAMILY at power 2M (even) or 2M+1 (odd)
    Discover {
        family: Family,
        #[arg(value_enum)]
        parity: Parity,
        m: u32,
        #[command(flatten)]
        common: CommonArgs,
        /// Numerator degree cap per term
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(long, default_value_t = 10)]
        holdout: usize,
        /// Most terms per shape in the open search
        #[arg(long, default_value_t = 3)]
        max_terms: usize,
    },
    /// Emit value grids or the formula table
    Table {
        #[command(flatten)]
        common: CommonArgs,
        /// Print the tabulated formulas instead of values
        #[arg(long)]
        corollaries: bool,
    },
}

fn resolve_jobs(flag: Option<usize>) -> Result<usize, CliError> {
    if let Ok(v) = std::env::var(JOBS_ENV) {
        return v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&j| j >= 1)
            .ok_or_else(|| {
                CliError::Usage(format!("{JOBS_ENV} must be a positive integer, got {v:?}"))
            });
    }
    Ok(flag.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, usize::from)))
}

fn config_from(
    common: &CommonArgs,
    default_format: Format,
    default_n_max: i64,
) -> Result<RunConfig, CliError> {
    let mut families = common.families.clone();
    families.sort();
    families.dedup();
    let mut methods = if common.methods.is_empty() {
        vec![Method::Oracle]
    } else {
        common.methods.clone()
    };
    methods.sort();
    methods.dedup();
    let config = RunConfig {
        families,
        m_max: common.m_max,
        n_max: common.n_max.unwrap_or(default_n_max),
        methods,
        format: common.format.unwrap_or(default_format),
        jobs: resolve_jobs(common.jobs)?,
        seed: common.seed,
    };
    config.validate()?;
    Ok(config)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Usage(format!("cannot write to stdout: {e}")))
        }
    }
}

fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {jobs} workers: {e}")))?;
    Ok(pool.install(f))
}

/// Evaluate one query; the text is the value, then method and note lines.
pub fn cmd_eval(
    family: Family,
    m: u32,
    n: i64,
    method: Method,
    format: Option<Format>,
) -> Result<String, CliError> {
    let q = MomentQuery::new(family, m, n)?;
    let r = evaluate(&q, method)?;
    Ok(match format {
        None => {
            let mut s = format!("{}\nmethod: {}\n", r.value, r.method);
            if let Some(note) = &r.validity_note {
                s.push_str(&format!("note: {note}\n"));
            }
            s
        }
        Some(f) => render::records(
            &[Record {
                family,
                m,
                n,
                method,
                value: r.value,
                note: r.validity_note,
            }],
            f,
        ),
    })
}

/// Run the verify suite; the report text is returned even on failure.
pub fn cmd_verify(
    config: &RunConfig,
    table: &[PrintedFormula],
    rediscover: bool,
) -> Result<(VerifyReport, String), CliError> {
    config.validate()?;
    let report = with_pool(config.jobs, || run_verify(config, table, rediscover))?;
    let text = render::verify_report(&report, config.format);
    Ok((report, text))
}

fn load_table(path: &PathBuf) -> Result<Vec<PrintedFormula>, CliError> {
    let raw = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&raw)
        .map_err(|e| CliError::Usage(format!("bad formula table {}: {e}", path.display())))
}

/// Value grid over the configured families, powers, `n` and methods; only
/// available evaluations are listed, sorted by `(family, m, n, method)`.
pub fn value_grid(config: &RunConfig) -> Vec<Record> {
    let mut cases = Vec::new();
    for &family in &config.families {
        for m in 0..=config.m_max {
            for n in 1..=config.n_max {
                for &method in &config.methods {
                    cases.push((MomentQuery { family, m, n }, method));
                }
            }
        }
    }
    let mut out: Vec<Record> = cases
        .par_iter()
        .filter_map(|(q, method)| {
            evaluate(q, *method).ok().map(|r| Record {
                family: q.family,
                m: q.m,
                n: q.n,
                method: *method,
                value: r.value,
                note: r.validity_note,
            })
        })
        .collect();
    out.sort_by_key(|r| (r.family, r.m, r.n, r.method));
    out
}

pub fn cmd_table(config: &RunConfig, corollaries: bool) -> Result<String, CliError> {
    config.validate()?;
    if corollaries {
        let list: Vec<PrintedFormula> = printed_formulas()
            .iter()
            .filter(|f| config.families.contains(&f.family))
            .cloned()
            .collect();
        return Ok(render::formulas(&list, config.format));
    }
    let grid = with_pool(config.jobs, || value_grid(config))?;
    Ok(render::records(&grid, config.format))
}

#[derive(Serialize)]
struct CandidateView<'a> {
    formula: String,
    ansatz: String,
    #[serde(flatten)]
    candidate: &'a ClosedFormCandidate,
}

#[derive(Serialize)]
struct DiscoverReport<'a> {
    family: Family,
    parity: Parity,
    m: u32,
    power: u32,
    search: &'static str,
    printed: Option<String>,
    matches_printed: Option<bool>,
    verified: usize,
    candidates: Vec<CandidateView<'a>>,
}

pub fn cmd_discover(
    family: Family,
    parity: Parity,
    m: u32,
    search_config: &SearchConfig,
) -> Result<String, CliError> {
    let power = 2 * m + u32::from(parity == Parity::Odd);
    let open = family == Family::D && parity == Parity::Even;
    let candidates: Vec<ClosedFormCandidate> = if open {
        explore_d_even(m, search_config)
    } else {
        vec![search(family, power, search_config).map_err(|e| CliError::Usage(e.to_string()))?]
    };
    let printed = (!open).then(|| lookup(family, power)).flatten();
    let matches_printed = printed.as_ref().map(|f| match &f.body {
        crate::moments::corollaries::FormulaBody::Terms(t) => candidates
            .iter()
            .any(|c| c.status.is_verified() && c.same_function_as(t)),
        crate::moments::corollaries::FormulaBody::IndicatorAtOne => false,
    });
    let report = DiscoverReport {
        family,
        parity,
        m,
        power,
        search: if open { "open" } else { "seeded" },
        printed: printed.as_ref().map(PrintedFormula::display),
        matches_printed,
        verified: candidates.iter().filter(|c| c.status.is_verified()).count(),
        candidates: candidates
            .iter()
            .map(|c| CandidateView {
                formula: c.formula(),
                ansatz: c.ansatz.to_string(),
                candidate: c,
            })
            .collect(),
    };
    Ok(render::to_json(&report))
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Eval {
            family,
            m,
            n,
            method,
            common,
        } => {
            let text = cmd_eval(family, m, n, method, common.format)?;
            emit(&common.out, &text)?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            common,
            corollary_table,
            rediscover,
        } => {
            let config = config_from(&common, Format::Json, 30)?;
            let table = match &corollary_table {
                Some(path) => load_table(path)?,
                None => printed_formulas().to_vec(),
            };
            let (report, text) = cmd_verify(&config, &table, rediscover)?;
            emit(&common.out, &text)?;
            match report.first_failure() {
                None => Ok(EXIT_OK),
                Some(check) => {
                    let witness = check
                        .witness
                        .as_ref()
                        .map(|w| match (w.family, w.m, w.n) {
                            (Some(f), Some(m), Some(n)) => {
                                format!(" family={f} m={m} n={n} lhs={} rhs={}", w.lhs, w.rhs)
                            }
                            _ => format!(" {}: lhs={} rhs={}", w.case, w.lhs, w.rhs),
                        })
                        .unwrap_or_default();
                    eprintln!("mismatch in {}:{witness}", check.name);
                    Ok(EXIT_MISMATCH)
                }
            }
        }
        Command::Discover {
            family,
            parity,
            m,
            common,
            max_degree,
            holdout,
            max_terms,
        } => {
            let config = config_from(&common, Format::Json, 40)?;
            let search_config = SearchConfig {
                holdout,
                max_degree,
                n_max: config.n_max,
                max_terms,
                ..SearchConfig::default()
            };
            let text = with_pool(config.jobs, || {
                cmd_discover(family, parity, m, &search_config)
            })??;
            emit(&common.out, &text)?;
            Ok(EXIT_OK)
        }
        Command::Table {
            common,
            corollaries,
        } => {
            let config = config_from(&common, Format::Json, 30)?;
            let text = cmd_table(&config, corollaries)?;
            emit(&common.out, &text)?;
            Ok(EXIT_OK)
        }
    }
}

/// Parse `args` (program name first) and run; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
