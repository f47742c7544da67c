//! Command-line front end behind the `subsel` binary.
//!
//! Exit codes: 0 success, 1 error, 2 a guarantee precondition is unmet (the
//! report is still written), 3 an exhaustive check would exceed the
//! enumeration cap, 64 usage error.

pub mod io;
pub mod report;
mod verify;

use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::lowerbounds::{Family, DEFAULT_ALPHA};
use crate::lowstretch::{self, SpanningTree};
use crate::randomized::{self, DEFAULT_DELTA, NO_GUARANTEE};
use crate::selection::SelectionResult;
use crate::{dualset, greedy, volume};

pub use io::{read_graph, read_matrix, write_matrix_market, MatrixFormat};
pub use report::{Report, TreeReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_WARNING: i32 = 2;
pub const EXIT_TOO_MANY: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "subsel", version, about = "Column subset selection and low-stretch trees")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Select columns of a short-fat matrix and report the pseudo-inverse norms.
    Select(SelectArgs),
    /// Build a spanning tree of a weighted graph and report its stretch.
    Lowstretch(LowstretchArgs),
    /// Run exhaustive checks on small instances.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SelectAlgo {
    #[value(name = "greedy-f")]
    GreedyF,
    #[value(name = "greedy-2")]
    Greedy2,
    Dualset,
    Leverage,
    Volume,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    pub format: MatrixFormat,
    /// Number of columns to keep; `volume` always keeps `n`.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum)]
    pub algo: SelectAlgo,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Slack of the rejection threshold for `volume`.
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,
    #[arg(long)]
    pub max_rounds: Option<usize>,
    /// Failure probability for `leverage`.
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    pub delta: f64,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TreeAlgo {
    Greedy,
    Maxweight,
    Random,
}

#[derive(Debug, Args)]
pub struct LowstretchArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_enum)]
    pub algo: TreeAlgo,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Volsamp,
    Lowerbound,
    Stretch,
    Identities,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Matrix for `volsamp` and `identities`; random when absent.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "auto")]
    pub format: MatrixFormat,
    #[arg(long, default_value_t = 3)]
    pub rows: usize,
    #[arg(long, default_value_t = 7)]
    pub cols: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random instances for `identities`.
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    /// Subset size; every feasible size when absent.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value = "spectral", value_parser = parse_family)]
    pub family: Family,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha: f64,
    #[arg(long)]
    pub graph: Option<PathBuf>,
}

fn parse_family(s: &str) -> std::result::Result<Family, String> {
    s.parse()
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match &cli.command {
        Command::Select(a) => cmd_select(a),
        Command::Lowstretch(a) => cmd_lowstretch(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

fn fail(e: &Error) -> i32 {
    eprintln!("error: {e}");
    EXIT_ERROR
}

fn emit<T: serde::Serialize>(value: &T, dest: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("report serializes");
    match dest {
        Some(path) => std::fs::write(path, text + "\n").map_err(|e| Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }),
        None => {
            // a closed pipe downstream is not an error of ours
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            Ok(())
        }
    }
}

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn require_k(k: Option<usize>) -> Result<usize> {
    k.ok_or_else(|| Error::BadK {
        k: 0,
        reason: "--k is required for this algorithm".into(),
    })
}

fn run_selection(a: &SelectArgs, x: &Matrix) -> Result<(SelectionResult, usize)> {
    let n = x.rows();
    let result = match a.algo {
        SelectAlgo::GreedyF => greedy::greedy_remove_frobenius(x, require_k(a.k)?)?,
        SelectAlgo::Greedy2 => greedy::greedy_remove_spectral(x, require_k(a.k)?)?,
        SelectAlgo::Dualset => dualset::dualset_select(x, require_k(a.k)?)?,
        SelectAlgo::Leverage => {
            let k = require_k(a.k)?;
            return match randomized::leverage_select_with_delta(x, k, a.seed, a.delta) {
                Ok(r) => Ok((r, k)),
                Err(Error::SampleRankDeficient { indices }) => {
                    Ok((rank_deficient_sample(x, k, a, indices)?, k))
                }
                Err(e) => Err(e),
            };
        }
        SelectAlgo::Volume => {
            if let Some(k) = a.k.filter(|&k| k != n) {
                return Err(Error::BadK {
                    k,
                    reason: format!("volume selection keeps exactly n = {n} columns"),
                });
            }
            volume::rejection_select(x, a.eta, a.seed, a.max_rounds)?
        }
    };
    let k = a.k.unwrap_or(n);
    Ok((result, k))
}

/// Report for a leverage sample that lost rank: norms are absent and the
/// run is flagged rather than treated as an input error.
fn rank_deficient_sample(
    x: &Matrix,
    k: usize,
    a: &SelectArgs,
    indices: Vec<usize>,
) -> Result<SelectionResult> {
    let (n, m) = (x.rows(), x.cols());
    let s = crate::linalg::pinv_fro_sq(x)?;
    let mut warnings = Vec::new();
    if k < randomized::sample_threshold(n, m, a.delta) {
        warnings.push(NO_GUARANTEE.to_string());
    }
    warnings.push("sampled columns do not have full row rank".to_string());
    Ok(SelectionResult {
        indices: crate::linalg::Subset::new(indices, m)?,
        algo: "leverage",
        fro_sq_selected: f64::NAN,
        spec_sq_selected: f64::NAN,
        fro_sq_full: s,
        spec_sq_full: crate::linalg::pinv_spec_sq(x)?,
        bound_fro: f64::INFINITY,
        bound_spec: f64::INFINITY,
        seed: Some(a.seed),
        rounds: None,
        elapsed_ms: 0.0,
        warnings,
    })
}

pub fn cmd_select(a: &SelectArgs) -> i32 {
    let outcome = (|| {
        let bytes = read_bytes(&a.input)?;
        let x = read_matrix(&a.input, a.format)?;
        let (result, k) = run_selection(a, &x)?;
        let rep = Report::from_selection(&result, report::digest(&bytes), x.rows(), x.cols(), k);
        emit(&rep, a.report.as_deref())?;
        Ok(rep)
    })();
    match outcome {
        Ok(rep) => {
            for w in &rep.warnings {
                eprintln!("warning: {w}");
            }
            if rep.warnings.is_empty() {
                EXIT_OK
            } else {
                EXIT_WARNING
            }
        }
        Err(e) => fail(&e),
    }
}

/// Relative disagreement allowed between the three stretch computations.
pub const STRETCH_AGREEMENT: f64 = 1e-8;

pub fn cmd_lowstretch(a: &LowstretchArgs) -> i32 {
    let outcome = (|| {
        let bytes = read_bytes(&a.graph)?;
        let g = read_graph(&a.graph)?;
        let timer = std::time::Instant::now();
        let tree: SpanningTree = match a.algo {
            TreeAlgo::Greedy => lowstretch::greedy_tree(&g)?,
            TreeAlgo::Maxweight => lowstretch::max_weight_tree(&g)?,
            TreeAlgo::Random => lowstretch::random_tree(&g, a.seed)?,
        };
        let direct = lowstretch::stretch_direct(&g, &tree)?;
        let trace = lowstretch::stretch_trace(&g, &tree)?;
        let subset = lowstretch::stretch_subset(&g, &tree)?;
        let mut warnings = Vec::new();
        let spread = [trace, subset]
            .iter()
            .map(|v| (v - direct).abs() / direct)
            .fold(0.0, f64::max);
        if spread > STRETCH_AGREEMENT {
            warnings.push(format!("stretch computations disagree (relative {spread:e})"));
        }
        let rep = TreeReport {
            schema_version: report::SCHEMA_VERSION,
            command: "lowstretch".into(),
            input_digest: report::digest(&bytes),
            algo: format!("{:?}", a.algo).to_lowercase(),
            n_vertices: g.n_vertices(),
            m: g.m(),
            edges: tree.edge_ids.indices().to_vec(),
            stretch_direct: direct,
            stretch_trace: trace,
            stretch_subset: subset,
            stretch_bound: lowstretch::stretch_bound(g.n_vertices(), g.m()),
            weight_product: tree.weight_product(&g),
            seed: (a.algo == TreeAlgo::Random).then_some(a.seed),
            elapsed_ms: timer.elapsed().as_secs_f64() * 1e3,
            warnings,
        };
        emit(&rep, a.report.as_deref())?;
        Ok(rep)
    })();
    match outcome {
        Ok(rep) if rep.warnings.is_empty() => EXIT_OK,
        Ok(rep) => {
            for w in &rep.warnings {
                eprintln!("warning: {w}");
            }
            EXIT_WARNING
        }
        Err(e) => fail(&e),
    }
}

pub fn cmd_verify(a: &VerifyArgs) -> i32 {
    match verify::run_suite(a) {
        Ok(checks) => {
            let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
            for c in &checks {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                println!("{tag}  {:width$}  {}", c.name, c.detail);
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            println!("{} checks, {failed} failed", checks.len());
            if failed == 0 {
                EXIT_OK
            } else {
                EXIT_ERROR
            }
        }
        Err(e @ Error::TooManySubsets { .. }) => {
            eprintln!("error: {e}");
            eprintln!(
                "use a smaller instance or raise the cap with {}",
                volume::ENUM_CAP_ENV
            );
            EXIT_TOO_MANY
        }
        Err(e) => fail(&e),
    }
}
