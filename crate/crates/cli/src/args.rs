use std::path::PathBuf;

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand};
use edocc_core::models::ModelKind;

#[derive(Debug, Parser)]
#[command(
    name = "edocc",
    version,
    about = "Emergency-department occupancy forecasting pipeline"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// TOML run configuration; command-line flags override its values.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Seed for synthetic data, downsampling and bootstrap.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Output file (written atomically); stdout when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Suppress progress messages on stderr.
    #[arg(long, short, global = true)]
    pub quiet: bool,

    /// Print the effective configuration as TOML and exit.
    #[arg(long, global = true)]
    pub print_config: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic hourly occupancy CSV.
    Synth(SynthArgs),
    /// Append calendar (and optionally technical-analysis) features to an occupancy CSV.
    Features(FeatureArgs),
    /// Rolling-origin backtest of one model over the test span.
    Backtest(BacktestArgs),
    /// Score a forecast matrix.
    Evaluate(EvaluateArgs),
    /// Kruskal-Wallis and Dunn-Holm comparison of several forecast matrices.
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Number of days to generate.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub days: Option<u64>,

    /// First generated day.
    #[arg(long)]
    pub start: Option<NaiveDate>,

    /// Holiday calendar (ISO dates, one per line).
    #[arg(long, value_name = "PATH")]
    pub holidays: Option<PathBuf>,

    /// Also write the calibration report as JSON.
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Occupancy CSV (`timestamp,occupancy`).
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,

    /// Replace missing hours with zero before use.
    #[arg(long)]
    pub impute_zero: bool,
}

#[derive(Debug, Args)]
pub struct FeatureArgs {
    #[command(flatten)]
    pub data: DataArgs,

    #[arg(long, value_name = "PATH")]
    pub holidays: Option<PathBuf>,

    /// Append the 30 technical-analysis columns.
    #[arg(long)]
    pub ta: bool,

    /// One flag column per named holiday.
    #[arg(long)]
    pub per_holiday: bool,

    /// Window length for the windowed indicators.
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    pub window: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    /// First validation day (end of training, exclusive).
    #[arg(long)]
    pub train_end: Option<NaiveDate>,

    /// First test day (end of validation, exclusive).
    #[arg(long)]
    pub val_end: Option<NaiveDate>,
}

#[derive(Debug, Args)]
pub struct BacktestArgs {
    #[command(flatten)]
    pub data: DataArgs,

    #[command(flatten)]
    pub split: SplitArgs,

    /// hwam, hwdm, snaive or sar.
    #[arg(long)]
    pub model: Option<ModelKind>,

    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub window: Option<u64>,

    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub horizon: Option<u64>,

    /// Seasonal period in hours.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub period: Option<u64>,

    /// Seasonal-AR lags, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub lags: Option<Vec<usize>>,

    /// Number of test days starting at the validation end.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub test_days: Option<u64>,

    /// Fit on raw values instead of train-fitted min-max scaled values.
    #[arg(long)]
    pub no_scale: bool,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Forecast-matrix CSV to score.
    #[arg(long, value_name = "PATH")]
    pub matrix: PathBuf,

    /// Occupancy CSV whose training split scales MSIS.
    #[command(flatten)]
    pub data: DataArgs,

    #[command(flatten)]
    pub split: SplitArgs,

    /// Model label in the report; defaults to the matrix file stem.
    #[arg(long)]
    pub name: Option<String>,

    /// Benchmark matrix for the MAE improvement percentage.
    #[arg(long, value_name = "PATH")]
    pub benchmark: Option<PathBuf>,

    #[arg(long)]
    pub alpha: Option<f64>,

    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub msis_period: Option<u64>,

    /// Crowding threshold in patients.
    #[arg(long)]
    pub threshold: Option<f64>,

    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub bootstrap_iters: Option<u64>,

    /// Daily crowding score: `max` (point forecasts) or `upper` (upper bounds).
    #[arg(long)]
    pub score: Option<String>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Forecast-matrix CSVs, at least two.
    #[arg(long = "matrix", value_name = "PATH", required = true)]
    pub matrices: Vec<PathBuf>,

    /// Labels in matrix order; defaults to file stems.
    #[arg(long, value_delimiter = ',')]
    pub names: Option<Vec<String>>,

    /// Only test pairs involving this model.
    #[arg(long)]
    pub against: Option<String>,
}
