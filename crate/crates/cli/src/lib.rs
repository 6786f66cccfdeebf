//! Command-line front end for scarmat: Table-1 comparisons, semiclassical
//! breakdowns, Weyl symbols and the property suites.

pub mod commands;
pub mod config;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::run;
pub use config::{Command, Format, RunConfig};
pub use report::Report;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] scarmat_core::Error),
    #[error("configuration: {0}")]
    Config(String),
    #[error("{0}: {1}")]
    Io(String, std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(String),
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Csv(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "scarmat",
    version,
    about = "Exact and semiclassical scar-function matrix elements for the cat map"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Exact vs semiclassical scar elements for a grid of N and t
    Table(Flags),
    /// Coherent-state propagator elements, exact vs periodized semiclassical
    Coherent(Flags),
    /// One scar element in both semiclassical modes, optionally term by term
    Scar(Flags),
    /// Property suites with measured residuals
    Props(Flags),
    /// Weyl symbol of the propagator against the closed-form sum
    Weyl(Flags),
}

/// Flags shared by every subcommand; unset flags fall back to the config file,
/// then to the command defaults.
#[derive(Debug, Default, Args)]
pub struct Flags {
    /// Dimensions, comma separated
    #[arg(long = "N", value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    /// Times, comma separated
    #[arg(long = "t", value_delimiter = ',', allow_hyphen_values = true)]
    pub t: Option<Vec<i64>>,
    /// Centre of the bra state as `p,q`
    #[arg(long)]
    pub x1: Option<String>,
    /// Centre of the ket state as `p,q`
    #[arg(long)]
    pub x2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub phi1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub phi2: Option<f64>,
    /// logN | logN-over-lambda | log-inv-hbar
    #[arg(long = "T-convention")]
    pub t_convention: Option<String>,
    /// exactW | paperA
    #[arg(long)]
    pub mode: Option<String>,
    /// Use unnormalized scar states
    #[arg(long)]
    pub no_normalize: bool,
    /// Largest |t| kept in each scar time sum
    #[arg(long)]
    pub cutoff: Option<usize>,
    /// json | csv | pretty
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed of the property-suite generator
    #[arg(long)]
    pub seed: Option<u64>,
    /// Suites to leave out, comma separated
    #[arg(long)]
    pub skip: Option<String>,
    /// Emit every t' term of the semiclassical sums
    #[arg(long)]
    pub breakdown: bool,
    /// Flat `key = value` file; flags take precedence over it
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl CliCommand {
    pub fn split(self) -> (Command, Flags) {
        match self {
            CliCommand::Table(f) => (Command::Table, f),
            CliCommand::Coherent(f) => (Command::Coherent, f),
            CliCommand::Scar(f) => (Command::Scar, f),
            CliCommand::Props(f) => (Command::Props, f),
            CliCommand::Weyl(f) => (Command::Weyl, f),
        }
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

/// Defaults, then the config file, then flags.
pub fn resolve(command: Command, flags: &Flags) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::defaults(command);
    if let Some(path) = &flags.config {
        cfg.apply_file(path)?;
    }
    let mut set = |k: &str, v: Option<String>| -> Result<(), CliError> {
        match v {
            Some(v) => cfg.set(k, &v),
            None => Ok(()),
        }
    };
    set("N", flags.n.as_deref().map(join))?;
    set("t", flags.t.as_deref().map(join))?;
    set("x1", flags.x1.clone())?;
    set("x2", flags.x2.clone())?;
    set("phi1", flags.phi1.map(|x| x.to_string()))?;
    set("phi2", flags.phi2.map(|x| x.to_string()))?;
    set("T-convention", flags.t_convention.clone())?;
    set("mode", flags.mode.clone())?;
    set("normalize", flags.no_normalize.then(|| "false".to_string()))?;
    set("cutoff", flags.cutoff.map(|x| x.to_string()))?;
    set("format", flags.format.clone())?;
    set("out", flags.out.as_ref().map(|p| p.display().to_string()))?;
    set("seed", flags.seed.map(|x| x.to_string()))?;
    set("skip", flags.skip.clone())?;
    set("breakdown", flags.breakdown.then(|| "true".to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}
