//! `singwave`: spectra, sweeps, simulations, extinction studies and
//! verification checks for the wave equation with damping `2α/x`.
//!
//! Exit codes: 0 success, 1 computation error, 2 configuration error.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::FileConfig;
use crate::output::Format;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("computation failed: {0}")]
    Compute(String),
    #[error("i/o error: {0}")]
    Io(String),
    /// Checks ran but at least one failed; the report is already written.
    #[error("{0} check(s) failed")]
    ChecksFailed(usize),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "singwave", version, about = "Wave equation with singular damping 2a/x on (0,1)")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Output file (stdout if omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps and randomised checks.
    #[arg(long, global = true, env = "SINGWAVE_JOBS")]
    jobs: Option<usize>,
    /// Flat config file, `key = value` lines or a JSON object.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Eigenvalues of the generator for one value of alpha.
    Spectrum(SpectrumArgs),
    /// Eigenvalue trajectories over a range of alpha.
    Sweep(SweepArgs),
    /// Time-domain simulation with snapshots and an energy trace.
    Simulate(SimulateArgs),
    /// Finite-time extinction report.
    Extinction(ExtinctionArgs),
    /// Numerical certificates (Hardy, resolvent bound, Gupta bound, identity).
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Number of conjugate pairs [default: 20].
    #[arg(long)]
    pub kmax: Option<usize>,
    /// Also report every eigenvalue with |lambda| below this [default: 0].
    #[arg(long)]
    pub radius: Option<f64>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Lower end of the alpha range [default: 1.1].
    #[arg(long)]
    pub from: Option<f64>,
    /// Upper end of the alpha range [default: 2.9].
    #[arg(long)]
    pub to: Option<f64>,
    /// Uniform step [default: 0.01].
    #[arg(long)]
    pub step: Option<f64>,
    /// Conjugate pairs per alpha [default: 5].
    #[arg(long)]
    pub kmax: Option<usize>,
    /// Keep exact integers in the grid.
    #[arg(long)]
    pub at_integers: bool,
    /// Do not add the points m ± 10^-j around integers.
    #[arg(long)]
    pub no_refine: bool,
}

#[derive(Args, Debug)]
pub struct RunArgs {
    #[arg(long)]
    pub alpha: Option<f64>,
    /// sine:m, bump, zero, mode:k or file:<path> (CSV x,u0,u1) [default: sine:1].
    #[arg(long)]
    pub preset: Option<String>,
    /// Interior grid points [default: 2000].
    #[arg(long)]
    pub n: Option<usize>,
    /// Time step [default: 5e-4].
    #[arg(long)]
    pub dt: Option<f64>,
    /// Final time [default: 4].
    #[arg(long = "t", alias = "T", short = 'T')]
    pub t_final: Option<f64>,
    /// implicit-midpoint or crank-nicolson [default: implicit-midpoint].
    #[arg(long)]
    pub scheme: Option<String>,
    /// Remove the standing-wave components first (integer alpha only).
    #[arg(long)]
    pub project: bool,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Snapshot times, comma separated [default: every 0.5 up to the final time].
    #[arg(long, value_delimiter = ',')]
    pub snapshots: Option<Vec<f64>>,
    /// Energy trace CSV (t,E) [default: <out>.energy.csv when --out is given].
    #[arg(long)]
    pub energy_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ExtinctionArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Energy ratio E(t)/E(0) counted as extinct [default: 1e-6].
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Accept non-integer alpha.
    #[arg(long)]
    pub allow_noninteger: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// all, hardy, resolvent, gupta or identity [default: all].
    #[arg(long)]
    pub check: Option<String>,
    /// Random trials [default: 100 for hardy, 200 for resolvent].
    #[arg(long)]
    pub trials: Option<usize>,
    /// Seed of the randomised checks [default: 7].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Largest n for the Gupta bound [default: 20].
    #[arg(long)]
    pub nmax: Option<usize>,
    /// Interior nodes of the resolvent check [default: 1000].
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Resolvent probe alpha [default: 2].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Resolvent probe sigma = -Re tau [default: 0].
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Resolvent probe eta = Im tau [default: 5].
    #[arg(long)]
    pub eta: Option<f64>,
}

/// Options shared by every subcommand after config resolution.
pub struct Common {
    pub format: Format,
    pub out: Option<PathBuf>,
    pub file: FileConfig,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let format = file.pick(cli.format, "format", Format::Csv)?;
    let out = match cli.out {
        Some(p) => Some(p),
        None => file.get::<String>("out")?.map(PathBuf::from),
    };
    let jobs = file.pick(cli.jobs, "jobs", 0)?;
    if jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Config(format!("--jobs: {e}")))?;
    }
    let common = Common { format, out, file };
    match cli.command {
        Command::Spectrum(a) => commands::spectrum(&common, a),
        Command::Sweep(a) => commands::sweep(&common, a),
        Command::Simulate(a) => commands::simulate(&common, a),
        Command::Extinction(a) => commands::extinction(&common, a),
        Command::Verify(a) => commands::verify(&common, a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("singwave: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
