mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::output::Format;

#[derive(Parser, Debug)]
#[command(name = "lame-qes", version, about = "Algebraic band-edge spectra of the associated Lamé equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Band-edge energies with residual and discriminant classification
    Spectrum(SpectrumArgs),
    /// Residuals, discriminants and (optionally) closed-form comparison
    Verify(VerifyArgs),
    /// Hill discriminant on an energy grid
    BandScan(BandScanArgs),
    /// Potential sampled over one period [0, 2K]
    Potential(PotentialArgs),
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// m as an integer or "p/q"
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<String>,
    /// l as an integer or "p/q"
    #[arg(long, allow_hyphen_values = true)]
    pub l: Option<String>,
    /// squared modulus k², strictly between 0 and 1
    #[arg(long, allow_hyphen_values = true)]
    pub k2: Option<f64>,
    /// TOML file with the same keys as the flags; flags win
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug, Clone)]
pub struct CheckArgs {
    /// number of grid points on [0, 2K] for the residual
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub residual_tol: Option<f64>,
    /// tolerance on ||Δ| − 2| for band-edge classification
    #[arg(long)]
    pub edge_tol: Option<f64>,
    /// local error tolerance of the monodromy integration
    #[arg(long)]
    pub ode_tol: Option<f64>,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub check: CheckArgs,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub check: CheckArgs,
    /// compare against the built-in closed forms
    #[arg(long)]
    pub fixtures: bool,
}

#[derive(Args, Debug)]
pub struct BandScanArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub e_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub e_max: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub ode_tol: Option<f64>,
}

#[derive(Args, Debug)]
pub struct PotentialArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub samples: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Spectrum(a) => commands::spectrum(a),
        Command::Verify(a) => commands::verify(a),
        Command::BandScan(a) => commands::band_scan(a),
        Command::Potential(a) => commands::potential(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
