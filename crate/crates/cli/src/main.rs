use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod output;

use output::Failure;

#[derive(Parser)]
#[command(
    name = "qsv",
    version,
    about = "Verification protocols from local Pauli projections"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Design a homogeneous protocol and export it with its table.
    Design(DesignArgs),
    /// Positivity and completeness of the target's quasi-probability table.
    Check(TableArgs),
    /// Identity weight removed by revising the homogeneous design.
    Revise(TableArgs),
    /// Monte Carlo acceptance rate of an ε-far state over many copies.
    Simulate(SimulateArgs),
    /// Fidelity estimate from single-copy pass statistics.
    Estimate(EstimateArgs),
    /// Fidelity-based entanglement witness of the target.
    Witness(WitnessArgs),
    /// Quasi-probability table as CSV or JSON.
    Export(ExportArgs),
}

#[derive(Args)]
struct TableArgs {
    /// Target state, e.g. bell, ghz:3, w:3, stab:+XX,+ZZ
    #[arg(long)]
    state: String,
    /// Transformation weights of X, Y, Z, as fractions or decimals
    #[arg(long, default_value = "1/3,1/3,1/3")]
    weights: String,
    /// nonadaptive, locc or locc(<s>)
    #[arg(long, default_value = "nonadaptive")]
    mode: String,
    /// Directory for artifacts
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DesignArgs {
    #[command(flatten)]
    table: TableArgs,
    /// Remove the identity hidden in each setting
    #[arg(long)]
    revise: bool,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    design: DesignArgs,
    /// Protocol JSON written by `design`; replaces the designed protocol
    #[arg(long)]
    protocol: Option<PathBuf>,
    /// Infidelity of the simulated source
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    /// Confidence parameter used when --copies is absent
    #[arg(long, default_value_t = 0.01)]
    gamma: f64,
    #[arg(long)]
    copies: Option<u64>,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct EstimateArgs {
    #[command(flatten)]
    design: DesignArgs,
    /// Infidelity of the simulated source
    #[arg(long, default_value_t = 0.0)]
    epsilon: f64,
    /// Number of single-copy tests
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct WitnessArgs {
    #[arg(long)]
    state: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableChoice {
    /// The target projector
    Target,
    /// The homogeneous design
    Design,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    design: DesignArgs,
    #[arg(long, value_enum, default_value = "design")]
    table: TableChoice,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Design(a) => commands::design(&a),
        Command::Check(a) => commands::check(&a),
        Command::Revise(a) => commands::revise(&a),
        Command::Simulate(a) => commands::simulate(&a),
        Command::Estimate(a) => commands::estimate(&a),
        Command::Witness(a) => commands::witness(&a),
        Command::Export(a) => commands::export(&a),
    };
    match result {
        Ok(code) => code,
        Err(failure) => failure.report(),
    }
}

impl From<qsv_core::QsvError> for Failure {
    fn from(e: qsv_core::QsvError) -> Self {
        Failure::Core(e)
    }
}
