use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

use commands::Failure;

/// Coherent control of Penning and associative ionization cross sections.
#[derive(Parser, Debug)]
#[command(name = "penning", version)]
struct Cli {
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for grid scans (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    threads: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compose cross sections for one prepared state.
    Compose(ScenarioArgs),
    /// Evaluate an objective on an (eta, xi) grid.
    Scan(ScanArgs),
    /// Grid scan followed by local refinement of both extrema.
    Optimize(OptimizeArgs),
    /// Check that composed cross sections survive rotations about the beam axis.
    CheckSymmetry(SymmetryArgs),
    /// Wigner small-d matrix or a single element.
    Wigner(WignerArgs),
    /// Couple a two-atom product state to total angular momentum.
    Couple(ScenarioArgs),
}

#[derive(Args, Debug, Clone)]
#[command(group = clap::ArgGroup::new("state_form").required(true).args(["config", "eta_rad", "beta_rad", "state"]))]
pub struct ScenarioArgs {
    /// Scenario JSON (table, state, process, overrides).
    #[arg(long, conflicts_with = "table")]
    pub config: Option<PathBuf>,

    /// Channel table: file path or bundled:<name>.
    #[arg(long)]
    pub table: Option<String>,

    /// Hopf population angle; requires --xi-rad.
    #[arg(long, requires = "xi_rad", allow_negative_numbers = true)]
    pub eta_rad: Option<f64>,

    /// Hopf relative phase.
    #[arg(long, requires = "eta_rad", allow_negative_numbers = true)]
    pub xi_rad: Option<f64>,

    /// Two-atom phase state with relative phase beta.
    #[arg(long, allow_negative_numbers = true)]
    pub beta_rad: Option<f64>,

    /// Prepare the phase in the coupled (molecular) basis instead.
    #[arg(long, requires = "beta_rad")]
    pub molecular: bool,

    /// State JSON in any accepted state form.
    #[arg(long)]
    pub state: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub process: Option<ProcessArg>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ProcessArg {
    Pi,
    Ai,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ObjectiveArg {
    Pi,
    Ai,
    Ratio,
}

#[derive(Args, Debug)]
pub struct GridArgs {
    /// Channel table: file path or bundled:<name>.
    #[arg(long, default_value = "bundled:ne_ar_50mK")]
    pub table: String,

    #[arg(long, value_enum, default_value = "ai")]
    pub objective: ObjectiveArg,

    #[arg(long, default_value_t = 181)]
    pub eta_points: usize,

    #[arg(long, default_value_t = 361)]
    pub xi_points: usize,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[command(flatten)]
    pub grid: GridArgs,

    /// Write `eta_rad,xi_rad,value` rows here.
    #[arg(long)]
    pub csv: Option<PathBuf>,

    /// Write a binary PGM heatmap here.
    #[arg(long)]
    pub pgm: Option<PathBuf>,

    /// Compare the attained range with a claimed one.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
    pub expect_range: Option<Vec<f64>>,
}

#[derive(Args, Debug)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub grid: GridArgs,

    /// Write the phase-only factor curve `eta_rad,factor` here.
    #[arg(long)]
    pub factor_csv: Option<PathBuf>,

    /// Samples of eta for the phase-only factor curve.
    #[arg(long, default_value_t = 181)]
    pub factor_points: usize,
}

#[derive(Args, Debug)]
pub struct SymmetryArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,

    /// Number of rotation angles, evenly spaced over [0, 2pi).
    #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u32).range(1..))]
    pub samples: u32,

    /// Rotate X-quantized input to Z before checking.
    #[arg(long)]
    pub rotate_first: bool,

    /// Keep cross terms the selection rule forbids (negative control).
    #[arg(long)]
    pub no_filter: bool,
}

#[derive(Args, Debug)]
pub struct WignerArgs {
    /// Twice the angular momentum.
    #[arg(long)]
    pub j2: i32,

    #[arg(long, allow_negative_numbers = true)]
    pub theta_rad: f64,

    /// Twice the row projection; requires --m2.
    #[arg(long, requires = "m2", allow_negative_numbers = true)]
    pub m2p: Option<i32>,

    /// Twice the column projection; requires --m2p.
    #[arg(long, requires = "m2p", allow_negative_numbers = true)]
    pub m2: Option<i32>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = commands::Output { json: cli.json, threads: cli.threads.map(|n| n as usize) };
    let result = match cli.command {
        Command::Compose(a) => commands::compose(&out, &a),
        Command::Scan(a) => commands::scan(&out, &a),
        Command::Optimize(a) => commands::optimize(&out, &a),
        Command::CheckSymmetry(a) => commands::check_symmetry(&out, &a),
        Command::Wigner(a) => commands::wigner(&out, &a),
        Command::Couple(a) => commands::couple(&out, &a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure { code, message }) => {
            if let Some(message) = message {
                eprintln!("error: {message}");
            }
            ExitCode::from(code)
        }
    }
}
