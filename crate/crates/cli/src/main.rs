//! `scatterfm`: synthesize far-field data, reconstruct the first component of a
//! two-component scatterer, evaluate disc oracles and run self-tests.
//!
//! Exit codes: 0 ok, 1 selftest failure, 2 validation or solver error,
//! 3 data-consistency error, 4 I/O error.

mod commands;
mod scene;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("selftest failed: {0}")]
    SelftestFailed(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("solver error: {0}")]
    Solver(String),
    #[error("data-consistency error: {0}")]
    Consistency(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::SelftestFailed(_) => 1,
            CliError::Validation(_) | CliError::Solver(_) => 2,
            CliError::Consistency(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<scatterfm::farfield::FarFieldError> for CliError {
    fn from(e: scatterfm::farfield::FarFieldError) -> Self {
        use scatterfm::farfield::FarFieldError as E;
        match e {
            _ if e.is_consistency_error() => CliError::Consistency(e.to_string()),
            E::Io(_) => CliError::Io(e.to_string()),
            E::Parse { .. } | E::UnsupportedVersion(_) => CliError::Consistency(e.to_string()),
            E::MissingDomain(_) | E::BadGrid(_) | E::BadNoise(_) => CliError::Validation(e.to_string()),
            _ => CliError::Solver(e.to_string()),
        }
    }
}

impl From<scatterfm::factorization::FactorizationError> for CliError {
    fn from(e: scatterfm::factorization::FactorizationError) -> Self {
        use scatterfm::factorization::FactorizationError as E;
        match e {
            E::BadWindow(_) => CliError::Validation(e.to_string()),
            _ => CliError::Solver(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "scatterfm", version, about = "Two-component far-field synthesis and factorization-method reconstruction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Synthesize the measured far-field operator of a scene (FFOP v1).
    Forward(ForwardArgs),
    /// Modify a measured operator, build F# and write the indicator grid (CSV, optional PGM).
    Reconstruct(ReconstructArgs),
    /// Separation-of-variables far field of a disc: coefficient table and FFOP file.
    Oracle(OracleArgs),
    /// Run the invariant suites of all modules.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output path.
    #[arg(long)]
    pub out: PathBuf,
    /// Overwrite existing output files.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Args)]
pub struct ForwardArgs {
    #[arg(long)]
    pub scene: PathBuf,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Number of incident/observation directions.
    #[arg(long, default_value_t = 64)]
    pub ndirs: usize,
    /// Relative Frobenius noise level δ.
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Boundary node parameter (2n nodes per curve).
    #[arg(long, default_value_t = 96)]
    pub nodes: usize,
    /// Volume grid size for penetrable media.
    #[arg(long, default_value_t = 48)]
    pub volume_grid: usize,
    /// Override the impedance parameter λ₀ of the scene.
    #[arg(long)]
    pub lambda0: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    #[arg(long)]
    pub scene: PathBuf,
    /// Measured far-field operator (FFOP v1).
    #[arg(long)]
    pub data: PathBuf,
    /// Indicator CSV path.
    #[command(flatten)]
    pub output: OutputArgs,
    /// Optional PGM image of the indicator.
    #[arg(long)]
    pub pgm: Option<PathBuf>,
    /// Sampling window `X0,X1,Y0,Y1,RES`.
    #[arg(long, default_value = "-6,6,-6,6,80", allow_hyphen_values = true)]
    pub grid: String,
    /// Reconstruction variant (defaults to the scene's).
    #[arg(long)]
    pub variant: Option<String>,
    /// Boundary node parameter for the artificial operators.
    #[arg(long, default_value_t = 64)]
    pub nodes: usize,
    /// Relative eigenvalue truncation.
    #[arg(long, default_value_t = scatterfm::factorization::DEFAULT_TRUNCATION)]
    pub truncation: f64,
    #[arg(long)]
    pub lambda0: Option<f64>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// dirichlet, neumann, impedance or transmission.
    #[arg(long, default_value = "dirichlet")]
    pub condition: String,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    /// Disc centre `X,Y`.
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    pub center: String,
    #[arg(long, default_value_t = 2.0)]
    pub k: f64,
    /// Impedance λ₀ (impedance condition).
    #[arg(long, default_value_t = 1.0)]
    pub lambda0: f64,
    /// Constant contrast (transmission condition).
    #[arg(long, default_value_t = 0.5)]
    pub q: f64,
    #[arg(long, default_value_t = 64)]
    pub ndirs: usize,
    /// Optional FFOP output of the oracle far-field matrix.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// Deliberately corrupt one fixture (testing the test harness itself).
    #[arg(long, hide = true)]
    pub inject_fault: Option<String>,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("SCATTERFM_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .map_err(|_| CliError::Validation(format!("SCATTERFM_THREADS={value:?} is not a non-negative integer")))?;
    // 0 keeps rayon's automatic choice
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Solver(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    match cli.command {
        Command::Forward(args) => commands::forward(&args),
        Command::Reconstruct(args) => commands::reconstruct(&args),
        Command::Oracle(args) => commands::oracle(&args),
        Command::Selftest(args) => selftest::run(args.inject_fault.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("scatterfm: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
