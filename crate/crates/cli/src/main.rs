//! `su11`: phase sensitivity of an SU(1,1) interferometer from the command line.
//!
//! Exit codes: 0 success, 1 usage or parameter error, 2 validation failure.

mod commands;
mod params;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use su11_core::analysis::{FigureId, SweepBackend, SweepVariable};

use params::ParamArgs;

#[derive(Debug, Parser)]
#[command(
    name = "su11",
    version,
    about = "Phase sensitivity of an SU(1,1) interferometer"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sensitivities and limits at one operating point.
    Point(PointArgs),
    /// Sweep one parameter over a uniform grid and write CSV.
    Sweep(SweepArgs),
    /// Write the dataset behind one of the figures (3a, 3b, 4, 5).
    Figure(FigureArgs),
    /// Coherent amplitude that minimizes the distance to the Heisenberg limit.
    Optimum(OptimumArgs),
    /// Cross-check the Fock oracle, the Gaussian engine and the closed forms.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    ClosedForm,
    GaussianEngine,
    Both,
}

impl From<BackendArg> for SweepBackend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::ClosedForm => SweepBackend::ClosedForm,
            BackendArg::GaussianEngine => SweepBackend::GaussianEngine,
            BackendArg::Both => SweepBackend::Both,
        }
    }
}

#[derive(Debug, Args)]
struct PointArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, value_enum, default_value = "closed-form")]
    backend: BackendArg,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Swept quantity: phi, g, r, beta, l1 or l2.
    #[arg(long, value_parser = parse_variable)]
    var: SweepVariable,
    #[arg(long, allow_negative_numbers = true)]
    start: f64,
    #[arg(long, allow_negative_numbers = true)]
    stop: f64,
    #[arg(long, default_value_t = 101)]
    points: usize,
    #[arg(long, value_enum, default_value = "closed-form")]
    backend: BackendArg,
    /// Leave out the intensity-detection column.
    #[arg(long)]
    no_intensity: bool,
    /// Output CSV path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FigureArgs {
    #[arg(long, value_parser = parse_figure)]
    id: FigureId,
    #[command(flatten)]
    params: ParamArgs,
    /// Grid start (g for 3a/3b, phi for 4/5).
    #[arg(long, allow_negative_numbers = true)]
    start: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    stop: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    /// Comma-separated squeeze strengths (3a) or coherent amplitudes (3b).
    #[arg(long, value_delimiter = ',')]
    series: Option<Vec<f64>>,
    /// Loss used for the single-loss curves of figure 4.
    #[arg(long)]
    loss: Option<f64>,
    /// Output CSV path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct OptimumArgs {
    #[arg(long, allow_negative_numbers = true)]
    g: f64,
    #[arg(long, allow_negative_numbers = true)]
    r: f64,
    /// Lower end of the search interval in |beta|.
    #[arg(long)]
    lo: Option<f64>,
    /// Upper end of the search interval in |beta|.
    #[arg(long)]
    hi: Option<f64>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    /// Fock cutoff per mode.
    #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u16).range(1..=64))]
    cutoff: u16,
    /// Maximum relative deviation between paths.
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
    /// Maximum probability allowed in the top Fock level.
    #[arg(long, default_value_t = 1e-10)]
    tail_tolerance: f64,
}

fn parse_variable(s: &str) -> Result<SweepVariable, String> {
    s.parse().map_err(|e: su11_core::Error| e.to_string())
}

fn parse_figure(s: &str) -> Result<FigureId, String> {
    s.parse()
        .map_err(|_| "expected one of 3a, 3b, 4, 5".to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Point(a) => commands::point(a),
        Command::Sweep(a) => commands::run_sweep(a),
        Command::Figure(a) => commands::figure(a),
        Command::Optimum(a) => commands::optimum(a),
        Command::Validate(a) => commands::validate(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
