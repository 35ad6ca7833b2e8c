//! `choresolver` command-line front end.
//!
//! Every invocation writes one document to stdout (JSON, or CSV for the
//! tabular subcommands when no `--out` is given) and logs, including the
//! resolved configuration, to stderr.

mod bench;
mod commands;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use choresolver::generators::{Family, WeightMode};
use choresolver::{Algorithm, Error};

pub use bench::{sweep, BenchConfig, BenchRow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser, Serialize)]
#[command(name = "choresolver", version, about = "Fair allocation of indivisible chores with exact certificates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// Run an allocation algorithm on an instance.
    Solve(SolveArgs),
    /// Check fairness criteria of an allocation.
    Verify(VerifyArgs),
    /// Compute exact or lower-bound MMS / APS values.
    Oracle(OracleArgs),
    /// Generate an instance of a named family.
    Gen(GenArgs),
    /// Price-of-fairness sweep over a family.
    Pof(PofArgs),
    /// Time and score every algorithm over a seeded random sweep.
    Bench(BenchArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct SolveArgs {
    #[arg(long, value_parser = parse_algorithm)]
    #[serde(serialize_with = "ser_display")]
    pub alg: Algorithm,
    /// Instance JSON; `-` reads stdin.
    #[arg(long)]
    pub input: PathBuf,
    /// Write the algorithm's event trace here.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Check mid-run invariants and the reduction certificate.
    #[arg(long)]
    pub assert_invariants: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    Prop,
    Prop1,
    /// Against uniform shares 1/n.
    Propx,
    Wprop,
    Wprop1,
    /// Against the instance's shares.
    Wpropx,
    Ef,
    Ef1,
    Efx,
    Mms,
    Aps,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShareMode {
    Exact,
    LowerBound,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Allocation JSON with a `bundles` field (the output of `solve` works).
    #[arg(long)]
    pub alloc: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "propx")]
    pub criteria: Vec<Criterion>,
    /// A criterion passes when every agent's α is at most this bound.
    #[arg(long, default_value = "1")]
    pub alpha: String,
    /// How MMS / APS values are obtained.
    #[arg(long, value_enum, default_value = "exact")]
    pub shares: ShareMode,
    /// Node budget for the MMS search.
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Compute {
    Mms,
    Aps,
    Both,
    MmsLb,
    ApsLb,
}

#[derive(Debug, Args, Serialize)]
pub struct OracleArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "both")]
    pub compute: Compute,
    /// `all` or an agent index.
    #[arg(long, default_value = "all")]
    pub agent: String,
    /// Node budget for the MMS search (overrides CHORESOLVER_BUDGET).
    #[arg(long)]
    pub budget: Option<u64>,
    /// Largest item count accepted by the APS oracle.
    #[arg(long)]
    pub aps_max_items: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct GenArgs {
    #[arg(long, value_parser = parse_family)]
    #[serde(serialize_with = "ser_display")]
    pub family: Family,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: Option<usize>,
    /// Rational `p/q`.
    #[arg(long)]
    pub eps: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_parser = parse_weight_mode, default_value = "uniform")]
    #[serde(skip)]
    pub weights: WeightMode,
    /// Set the document's normalize flag so rows are scaled at load.
    #[arg(long)]
    pub normalize: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct PofArgs {
    #[arg(long, value_parser = parse_family)]
    #[serde(serialize_with = "ser_display")]
    pub family: Family,
    /// `n=2..6` or `m=4..8` (inclusive); a single value is allowed.
    #[arg(long)]
    pub range: String,
    #[arg(long, value_parser = parse_algorithm, default_value = "bid-and-take")]
    #[serde(serialize_with = "ser_display")]
    pub alg: Algorithm,
    /// Also compute the cheapest fair allocation by enumeration.
    #[arg(long)]
    pub certify: bool,
    #[arg(long)]
    pub eps: Option<String>,
    /// Fixed agent count when the range sweeps `m`.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct BenchArgs {
    /// Agent counts, e.g. `2..5`.
    #[arg(long, default_value = "2..5")]
    pub n: String,
    /// Item counts, e.g. `4..10`.
    #[arg(long, default_value = "4..10")]
    pub m: String,
    /// Instances per (n, m) cell.
    #[arg(long, default_value_t = 50)]
    pub seeds: u64,
    /// First seed; cell instances use consecutive seeds from here.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_parser = parse_weight_mode, default_value = "uniform")]
    #[serde(skip)]
    pub weights: WeightMode,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn ser_display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_weight_mode(s: &str) -> Result<WeightMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Failure of a subcommand, mapped to an exit code by [`run_with_io`].
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Core(Error),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParams(msg) => Failure::Usage(msg),
            other => Failure::Core(other),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Core(Error::Json(e))
    }
}

/// Parses `argv` (including the program name) and runs the subcommand
/// against the process's stdout and stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with_io(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with_io<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(stdout, "{rendered}");
            } else {
                let _ = write!(stderr, "{rendered}\n{}", Cli::command().render_help());
            }
            return code;
        }
    };
    if let Ok(cfg) = serde_json::to_string(&cli.command) {
        let _ = writeln!(stderr, "config: {cfg}");
    }
    let outcome = match &cli.command {
        Command::Solve(a) => commands::solve(a, stdout),
        Command::Verify(a) => commands::verify(a, stdout),
        Command::Oracle(a) => commands::oracle(a, stdout),
        Command::Gen(a) => commands::gen(a, stdout, stderr),
        Command::Pof(a) => commands::pof(a, stdout),
        Command::Bench(a) => bench::bench(a, stdout),
    };
    match outcome {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}\n\n{}", Cli::command().render_help());
            EXIT_USAGE
        }
        Err(Failure::Core(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            match e {
                Error::BudgetExceeded { .. } => EXIT_BUDGET,
                _ => EXIT_ERROR,
            }
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_ERROR
        }
    }
}
