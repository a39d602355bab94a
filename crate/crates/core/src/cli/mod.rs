//! Command-line front end. Every command writes a JSON (or CSV) artifact to
//! `--output` or standard output, and prints cross-check lines to standard error.

mod commands;
mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::error::EdmError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("invalid JSON in {path}: {source}")]
    Parse { path: PathBuf, source: serde_json::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Edm(#[from] EdmError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Read { .. } | CliError::Parse { .. } => 2,
            CliError::Write { .. } => 1,
            CliError::Edm(e) => match e {
                EdmError::RegionTooLarge { .. }
                | EdmError::DimensionMismatch { .. }
                | EdmError::InvalidRegion(_)
                | EdmError::InvalidPotential(_)
                | EdmError::InvalidParams(_)
                | EdmError::InvalidVariance(_) => 2,
                _ => 1,
            },
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "edm", version, about = "Elastic dimer-monomer systems: exact sums, Gaussian moments and transfer operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write the artifact here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Partition function, free energy and configuration count by enumeration.
    Exact(ExactArgs),
    /// Gaussian product moment of the matching field, checked against enumeration.
    Moment(MomentArgs),
    /// Monte Carlo estimate of the product moment.
    Mc(McArgs),
    /// Two-dimensional Manhattan system on the staircase region of level N.
    Manhattan2d(Manhattan2dArgs),
    /// Leading eigenvalue, moment Lyapunov exponent and its upper bound in 1D.
    Spectral1d(Spectral1dArgs),
    /// Generating-function recursion and the pantograph residual of the eigenvector.
    Pantograph(PantographArgs),
    /// Moment Lyapunov exponent over a grid of (mu, rho), as CSV.
    Surface(SurfaceArgs),
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    #[arg(long)]
    pub region: PathBuf,
    #[arg(long)]
    pub potential: PathBuf,
    /// Largest region accepted.
    #[arg(long, default_value_t = crate::partition::DEFAULT_ENUMERATION_CAP)]
    pub cap: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct MomentArgs {
    #[arg(long)]
    pub region: PathBuf,
    #[arg(long)]
    pub potential: PathBuf,
    #[arg(long, default_value_t = crate::partition::DEFAULT_ENUMERATION_CAP)]
    pub cap: usize,
    /// Box radius for the admissibility sums.
    #[arg(long, default_value_t = crate::kernel::DEFAULT_ADMISSIBILITY_RADIUS)]
    pub radius: u32,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SamplerName {
    /// Moving average of midpoint noises.
    Ma,
    /// Unilateral field with product-geometric covariance.
    Pickard,
    /// Alternating AR chain along the region's site order.
    Aar,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[arg(long, value_enum)]
    pub sampler: SamplerName,
    #[arg(long)]
    pub region: PathBuf,
    #[arg(long, default_value_t = 100_000)]
    pub n: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1.0)]
    pub mu: f64,
    /// Correlations, comma separated: one per axis for `ma`, one or two for the others.
    #[arg(long, value_delimiter = ',', required = true)]
    pub rho: Vec<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub white_noise: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct Manhattan2dArgs {
    #[arg(long = "N")]
    pub level: usize,
    #[arg(long)]
    pub rho1: f64,
    #[arg(long)]
    pub rho2: f64,
    #[arg(long)]
    pub mu: f64,
    /// Also write the polynomial of the final level as JSON.
    #[arg(long)]
    pub dump_polynomial: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Initial Hermite truncation.
    #[arg(long = "K", default_value_t = crate::spectral1d::DEFAULT_TRUNCATION)]
    pub truncation: usize,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, default_value_t = 100_000)]
    pub max_iter: usize,
    /// Keep the truncation fixed instead of doubling it until the eigenvalue settles.
    #[arg(long)]
    pub fixed: bool,
}

impl SolverArgs {
    pub fn params(&self) -> crate::spectral1d::SolverParams {
        crate::spectral1d::SolverParams {
            truncation: self.truncation,
            tol: self.tol,
            max_iter: self.max_iter,
            adaptive: !self.fixed,
        }
    }
}

#[derive(Debug, Args)]
pub struct Spectral1dArgs {
    #[arg(long)]
    pub mu: f64,
    #[arg(long)]
    pub rho: f64,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PantographArgs {
    #[arg(long)]
    pub mu: f64,
    #[arg(long)]
    pub rho: f64,
    #[arg(long = "N", default_value_t = 10)]
    pub level: usize,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SurfaceArgs {
    /// `start:stop:points`, both ends included.
    #[arg(long)]
    pub mu_grid: String,
    /// `start:stop:points`, both ends included.
    #[arg(long)]
    pub rho_grid: String,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Also write the exponent as a gnuplot grid (blank line between mu blocks).
    #[arg(long)]
    pub emit_plot_data: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutputArgs,
}

/// Parses `argv` (program name first), runs the command and returns the exit code:
/// 0 on success, 2 on argument errors, 1 on numeric failures or failed checks.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match commands::execute(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
