//! `jdrift`: entropy-driven drift on Johnson graphs from the command line.
//!
//! Every subcommand writes CSV (and optionally SVG) into the output
//! directory together with a `manifest_<command>.json` run record.
//!
//! Exit codes: 0 success, 1 verification failure or I/O error, 2 usage or
//! domain error.

mod commands;
mod manifest;
mod output;
mod svg;

use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "jdrift", version, about = "Entropy-driven drift on Johnson graphs J(n,k)")]
struct Cli {
    /// Directory for all output files.
    #[arg(long, global = true, env = "JDRIFT_OUT_DIR", default_value = ".")]
    out_dir: PathBuf,

    /// Worker threads for simulation. Results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Shell sizes, entropy landscape and the distance chain.
    Analyze(AnalyzeArgs),
    /// Expected hitting times for a sweep of guidance strengths.
    Hitting(HittingArgs),
    /// Monte Carlo trajectories of the swap walk.
    Simulate(SimulateArgs),
    /// Exhaustive oracle checks on every small instance.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct Instance {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub instance: Instance,
    /// Guidance strength for the chain columns.
    #[arg(long, default_value_t = 0.0)]
    pub beta: f64,
    /// Also write entropy and drift plots.
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Args)]
pub struct HittingArgs {
    #[command(flatten)]
    pub instance: Instance,
    /// Comma-separated guidance strengths.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub beta: Vec<f64>,
    /// Inclusive distance range `a..b`, or a single distance. Defaults to `1..d_max`.
    #[arg(long, value_parser = parse_range)]
    pub m: Option<RangeInclusive<usize>>,
    /// Largest `n` for which exact rationals are reported.
    #[arg(long, default_value_t = jdrift::DEFAULT_EXACT_CUTOFF)]
    pub exact_cutoff: usize,
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Mode {
    /// Walk on explicit subsets.
    Full,
    /// Walk on the distance chain directly.
    Lumped,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub instance: Instance,
    #[arg(long, default_value_t = 0.0)]
    pub beta: f64,
    /// Starting distance from the target.
    #[arg(long, default_value_t = 1)]
    pub start: usize,
    #[arg(long, default_value_t = 100)]
    pub trajectories: usize,
    #[arg(long, default_value_t = 500)]
    pub steps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Mode::Full)]
    pub mode: Mode,
    /// Stop each trajectory on reaching the target.
    #[arg(long)]
    pub absorbing: bool,
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 7)]
    pub max_n: usize,
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let bad = |_| format!("expected `a..b` or an integer, got `{s}`");
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b): (usize, usize) = (a.trim().parse().map_err(bad)?, b.trim().parse().map_err(bad)?);
            if a > b {
                return Err(format!("empty range `{s}`"));
            }
            Ok(a..=b)
        }
        None => {
            let m = s.trim().parse().map_err(bad)?;
            Ok(m..=m)
        }
    }
}

fn run(cli: Cli) -> Result<(), commands::CliError> {
    std::fs::create_dir_all(&cli.out_dir)?;
    let out = cli.out_dir.as_path();
    let body = || match &cli.command {
        Command::Analyze(a) => commands::analyze(a, out),
        Command::Hitting(a) => commands::hitting(a, out),
        Command::Simulate(a) => commands::simulate(a, out),
        Command::Verify(a) => commands::verify(a, out),
    };
    match cli.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| commands::CliError::Usage(e.to_string()))?
            .install(body),
        None => body(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("jdrift: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
