//! `zonepart`: thermal models, interaction quantification, partitioning
//! and control-architecture evaluation from the command line.

mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "zonepart", version, about = "Partition multi-zone buildings for decentralized MPC")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Assemble and discretize a building model and write its matrices.
    Model(ModelArgs),
    /// Build the interaction graph from a closed-loop excitation year.
    Quantify(QuantifyArgs),
    /// Solve the clustering problem for one or every cluster count.
    Partition(PartitionArgs),
    /// Run centralized and decentralized MPC days and rank architectures.
    Evaluate(EvaluateArgs),
    /// Compute PI, ODM, FPM and WPM from raw outcome triples.
    ReplayMetrics(ReplayArgs),
    /// Print a saved evaluation report.
    Report(ReportArgs),
}

#[derive(Args, Debug, Clone)]
pub struct BuildingArgs {
    /// Building description (TOML); the bundled five-zone office if omitted.
    #[arg(long)]
    pub building: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct WeatherArgs {
    /// Disturbance CSV; the bundled synthetic year if omitted.
    #[arg(long)]
    pub weather: Option<PathBuf>,
    /// Comfort schedule (TOML with lower, upper, start_hour, end_hour).
    #[arg(long)]
    pub schedule: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ModelArgs {
    #[command(flatten)]
    pub building: BuildingArgs,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct QuantifyArgs {
    #[command(flatten)]
    pub building: BuildingArgs,
    #[command(flatten)]
    pub weather: WeatherArgs,
    /// Root seed of the random set-point excitation.
    #[arg(long, default_value_t = 2023)]
    pub seed: u64,
    /// Bins per edge distribution.
    #[arg(long, default_value_t = 10)]
    pub nd: usize,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Stochastic,
    Robust,
}

#[derive(Args, Debug)]
pub struct PartitionArgs {
    /// Interaction graph written by `quantify`.
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Stochastic)]
    pub mode: Mode,
    /// Number of clusters.
    #[arg(long, conflicts_with = "all_n", required_unless_present = "all_n")]
    pub n: Option<usize>,
    /// Solve for every cluster count from 1 to the number of zones.
    #[arg(long)]
    pub all_n: bool,
    /// Branch-and-bound node limit.
    #[arg(long, default_value_t = 2_000_000)]
    pub node_limit: usize,
    /// Solve the plain formulation without the cluster-ordering rows.
    #[arg(long)]
    pub no_symmetry_breaking: bool,
    /// Accepted for reproducible scripts; the solver is single-threaded.
    #[arg(long)]
    pub single_thread: bool,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct MetricArgs {
    /// Normalizers `u_tot,yv_ave,yv_max` in kWh, °C, °C.
    #[arg(long, default_value = "100,1,3")]
    pub weights: String,
    /// Weight of the optimality term in WPM.
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
}

#[derive(Args, Debug)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub building: BuildingArgs,
    #[command(flatten)]
    pub weather: WeatherArgs,
    #[command(flatten)]
    pub metrics: MetricArgs,
    /// Partition files to evaluate (as written by `partition`).
    pub partitions: Vec<PathBuf>,
    /// Evaluate every connected partition with this many clusters.
    #[arg(long, conflicts_with = "all_n")]
    pub n: Option<usize>,
    /// Evaluate every connected partition of the zone graph.
    #[arg(long)]
    pub all_n: bool,
    /// Day of the weather series to simulate.
    #[arg(long, default_value_t = zonepart::mpc::REPRESENTATIVE_DAY)]
    pub day: usize,
    /// Also run each architecture with this zone left uncontrolled.
    #[arg(long)]
    pub uncontrolled: Option<u32>,
    /// Recorded in the report header.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Run every closed-loop day on the calling thread.
    #[arg(long)]
    pub single_thread: bool,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct ReplayArgs {
    /// CSV with label,n,u_tot,yv_ave,yv_max,fault_u_tot,fault_yv_ave,fault_yv_max.
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub metrics: MetricArgs,
    /// Directory for `metrics.csv`; printed only if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    /// `evaluation.json` written by `evaluate`.
    #[arg(long)]
    pub input: PathBuf,
    /// Directory for a CSV copy; printed only if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Model(a) => commands::model(&a),
        Command::Quantify(a) => commands::quantify(&a),
        Command::Partition(a) => commands::partition(&a),
        Command::Evaluate(a) => commands::evaluate(&a),
        Command::ReplayMetrics(a) => commands::replay_metrics(&a),
        Command::Report(a) => commands::report(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
