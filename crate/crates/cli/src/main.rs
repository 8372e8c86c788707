//! `blockdet`: generate matrices, evaluate single bounds, run the verification
//! suite and format its reports.
//!
//! Exit codes: 0 success or bound holds, 1 violation found, 2 usage or input error.

mod inputs;
mod summary;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use blockdet::bounds::{BoundName, DEFAULT_TOL};
use blockdet::gen::{random_block_pd, random_pd, random_psd_singular, GenConfig, ScalarKind, Shape};
use blockdet::harness::{self, SuiteConfig, SuiteReport};

#[derive(Parser)]
#[command(name = "blockdet", version, about = "Determinant inequalities for Hadamard and Khatri-Rao products")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every requested bound on generated instances.
    Verify(VerifyArgs),
    /// Evaluate one bound on matrices read from JSON files.
    Bound(BoundArgs),
    /// Generate a random matrix.
    Gen(GenArgs),
    /// Summarize a suite report.
    Report(ReportArgs),
    /// Check the reduction identities between bounds.
    Reductions(ReductionArgs),
}

#[derive(clap::Args)]
struct SuiteArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Comma-separated bound names (default: all).
    #[arg(long, value_delimiter = ',')]
    bounds: Vec<BoundName>,
    #[arg(long, default_value_t = 5)]
    max_n: usize,
    #[arg(long, default_value_t = 3)]
    max_block: usize,
    #[arg(long, default_value_t = 4)]
    max_factors: usize,
    #[arg(long, default_value_t = 1e4)]
    cond_cap: f64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Write JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl SuiteArgs {
    fn config(&self, include_singular: bool) -> SuiteConfig {
        SuiteConfig {
            seed: self.seed,
            samples_per_bound: self.samples,
            max_n: self.max_n,
            max_block_dim: self.max_block,
            max_factors: self.max_factors,
            cond_cap: self.cond_cap,
            tol: self.tol,
            bounds: if self.bounds.is_empty() { BoundName::ALL.to_vec() } else { self.bounds.clone() },
            include_singular,
        }
    }
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[command(flatten)]
    suite: SuiteArgs,
    /// Route singular PSD instances to the bounds (perturbed for PD-only bounds).
    #[arg(long)]
    include_singular: bool,
}

#[derive(clap::Args)]
struct ReductionArgs {
    #[command(flatten)]
    suite: SuiteArgs,
}

#[derive(clap::Args)]
struct BoundArgs {
    #[arg(long)]
    name: BoundName,
    /// Matrix, block-matrix, array or instance JSON files.
    #[arg(long, num_args = 1.., required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Split row for `fischer`.
    #[arg(long)]
    split: Option<usize>,
    /// Exponent for `coro24`.
    #[arg(long)]
    q: Option<u32>,
    /// Partition plain matrix inputs into an `n×n` grid of square blocks.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Pd,
    Psd,
    BlockPd,
}

#[derive(clap::Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: GenKind,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    block_dim: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e4)]
    cond_cap: f64,
    #[arg(long, default_value_t = 1)]
    rank_deficit: usize,
    /// Complex Hermitian output instead of real symmetric.
    #[arg(long)]
    complex: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
    Md,
}

#[derive(clap::Args)]
struct ReportArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

/// A failure that maps to exit code 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type CliResult = Result<ExitCode, InputError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(InputError(msg)) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    let result = match cli.command {
        Command::Verify(args) => cmd_verify(&args),
        Command::Bound(args) => cmd_bound(&args),
        Command::Gen(args) => cmd_gen(&args),
        Command::Report(args) => cmd_report(&args),
        Command::Reductions(args) => cmd_reductions(&args),
    };
    result.unwrap_or_else(|InputError(msg)| {
        eprintln!("error: {msg}");
        ExitCode::from(2)
    })
}

fn configure_threads() -> Result<(), InputError> {
    let Ok(value) = std::env::var("BLOCKDET_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .map_err(|_| InputError(format!("BLOCKDET_THREADS must be a positive integer, got `{value}`")))?;
    if threads == 0 {
        return Err(InputError("BLOCKDET_THREADS must be a positive integer, got `0`".into()));
    }
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    Ok(())
}

fn exit_for(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), InputError> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n")).map_err(|e| InputError(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{text}")?;
            Ok(())
        }
    }
}

fn cmd_verify(args: &VerifyArgs) -> CliResult {
    let cfg = args.suite.config(args.include_singular);
    let report = harness::run_suite(&cfg)?;
    emit(args.suite.out.as_deref(), &serde_json::to_string_pretty(&report)?)?;
    for b in &report.bounds {
        eprintln!("{:<16} samples {:>6}  violations {:>4}  equality {:>6}", b.name.as_str(), b.samples, b.violations, b.equality_hits);
    }
    eprintln!("total violations: {}", report.total_violations);
    Ok(exit_for(report.passed()))
}

fn cmd_reductions(args: &ReductionArgs) -> CliResult {
    let cfg = args.suite.config(false);
    let report = harness::check_reductions(&cfg)?;
    emit(args.suite.out.as_deref(), &serde_json::to_string_pretty(&report)?)?;
    for c in &report.checks {
        let verdict = if c.passed { "ok" } else { "FAILED" };
        eprintln!("{:<32} {:>6} samples  max {:e}  {verdict}", c.name, c.samples, c.max_discrepancy);
    }
    Ok(exit_for(report.passed))
}

fn cmd_bound(args: &BoundArgs) -> CliResult {
    let instance = inputs::build_instance(args.name, &args.inputs, args.split, args.q, args.n)?;
    let report = harness::evaluate(args.name, &instance, args.tol)?;
    emit(None, &serde_json::to_string_pretty(&report)?)?;
    Ok(exit_for(report.holds))
}

fn cmd_gen(args: &GenArgs) -> CliResult {
    let shape = match args.kind {
        GenKind::BlockPd => match (args.n, args.block_dim) {
            (Some(n), Some(block_dim)) => Shape::Block { n, block_dim },
            _ => return Err(InputError("--kind block-pd needs --n and --block-dim".into())),
        },
        GenKind::Pd | GenKind::Psd => match args.dim {
            Some(dim) => Shape::Dense { dim },
            None => return Err(InputError("--kind pd/psd needs --dim".into())),
        },
    };
    let cfg = GenConfig {
        seed: args.seed,
        shape,
        cond_cap: args.cond_cap,
        kind: if args.complex { ScalarKind::Complex } else { ScalarKind::Real },
        rank_deficit: if matches!(args.kind, GenKind::Psd) { args.rank_deficit } else { 0 },
    };
    let text = match args.kind {
        GenKind::Pd => serde_json::to_string_pretty(&random_pd(&cfg)?)?,
        GenKind::Psd => serde_json::to_string_pretty(&random_psd_singular(&cfg)?)?,
        GenKind::BlockPd => serde_json::to_string_pretty(&random_block_pd(&cfg)?)?,
    };
    emit(args.out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_report(args: &ReportArgs) -> CliResult {
    let text = fs::read_to_string(&args.input).map_err(|e| InputError(format!("{}: {e}", args.input.display())))?;
    let report: SuiteReport = serde_json::from_str(&text)?;
    let rows = summary::rows(&report);
    let out = match args.format {
        Format::Csv => summary::csv(&rows)?,
        Format::Json => serde_json::to_string_pretty(&rows)?,
        Format::Md => summary::markdown(&rows),
    };
    let mut stdout = std::io::stdout().lock();
    write!(stdout, "{out}")?;
    if matches!(args.format, Format::Json) {
        writeln!(stdout)?;
    }
    Ok(ExitCode::SUCCESS)
}
