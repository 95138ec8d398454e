use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fixpoint_core::experiments::{
    DEFAULT_EPSILON_CLIP, DEFAULT_GRID_POINTS, DEFAULT_STOP_THRESHOLD, DEFAULT_TRIALS,
};
use fixpoint_core::iteration::DEFAULT_MAX_ITER;

#[derive(Parser, Debug)]
#[command(
    name = "fixpoint",
    version,
    about = "Relaxed fixed-point iterations of nonexpansive linear and affine maps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Suppress the human-readable summary on stderr.
    #[arg(long, short, global = true)]
    pub quiet: bool,

    /// Include per-step histories in `run` output and log at info level.
    #[arg(long, short, global = true)]
    pub verbose: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Certify an operator and report λ̄ and the averagedness modulus.
    Check(CheckArgs),
    /// Run one relaxed iteration.
    Run(RunArgs),
    /// Constant-λ sweep over seeded random starts.
    Sweep(SweepArgs),
    /// Adaptive runs over the same starts as `sweep`.
    Abbr(SweepArgs),
    /// Sweep plus adaptive runs, with optional CSV and SVG output.
    Experiment(ExperimentArgs),
}

#[derive(Args, Debug)]
pub struct OperatorArgs {
    /// Operator JSON file: {"dim": d, "rows": [[..], ..], "offset": [..]}.
    #[arg(long, value_name = "PATH", conflicts_with = "diag", required_unless_present = "diag")]
    pub operator: Option<PathBuf>,

    /// Diagonal matrix shorthand, e.g. `--diag 0.7,0.2`.
    #[arg(long, value_name = "A,B,..", value_delimiter = ',', allow_hyphen_values = true)]
    pub diag: Option<Vec<f64>>,

    /// Offset b for `--diag`, making the map x ↦ Rx + b.
    #[arg(long, value_name = "B1,B2,..", value_delimiter = ',', allow_hyphen_values = true, requires = "diag")]
    pub offset: Option<Vec<f64>>,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[command(flatten)]
    pub operator: OperatorArgs,

    /// Seed for the sampled λ̄ estimator (used above dimension 64).
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct ScheduleArgs {
    /// Schedule JSON file, e.g. {"type": "banded_random", "epsilon": 0.1, "seed": 42}.
    #[arg(long, value_name = "PATH")]
    pub schedule: Option<PathBuf>,

    /// Constant relaxation parameter.
    #[arg(long, value_name = "L")]
    pub lambda: Option<f64>,

    /// Adaptive rule with clip ε.
    #[arg(long, value_name = "EPS")]
    pub adaptive: Option<f64>,
}

#[derive(Args, Debug)]
pub struct RunArgs {
    #[command(flatten)]
    pub operator: OperatorArgs,

    #[command(flatten)]
    pub schedule: ScheduleArgs,

    /// Starting point.
    #[arg(long, value_name = "V1,V2,..", value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "seed")]
    pub x0: Option<Vec<f64>>,

    /// Draw the start uniformly on the unit sphere from this seed.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Stop when ‖x_n‖ < T.
    #[arg(long, value_name = "T")]
    pub stop_norm: Option<f64>,

    /// Stop when ‖x_n − Op x_n‖ < T (default 1e-10 when no other criterion is given).
    #[arg(long, value_name = "T")]
    pub stop_residual: Option<f64>,

    /// Stop when within `--target-tol` of this point.
    #[arg(long, value_name = "P1,P2,..", value_delimiter = ',', allow_hyphen_values = true)]
    pub target: Option<Vec<f64>>,

    #[arg(long, value_name = "T", default_value_t = 1e-6, requires = "target")]
    pub target_tol: f64,

    #[arg(long, value_name = "N", default_value_t = DEFAULT_MAX_ITER)]
    pub max_iter: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Start {
    UnitSphere,
    UnitBall,
    Gaussian,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub operator: OperatorArgs,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, value_name = "N", default_value_t = DEFAULT_TRIALS)]
    pub trials: usize,

    /// Number of grid points on [ε, 1 − ε].
    #[arg(long, value_name = "N", default_value_t = DEFAULT_GRID_POINTS)]
    pub grid: usize,

    /// Grid margin and adaptive clip.
    #[arg(long, value_name = "EPS", default_value_t = DEFAULT_EPSILON_CLIP)]
    pub epsilon: f64,

    /// Stopping threshold (norm, or distance to the projection when Fix ≠ {0}).
    #[arg(long, value_name = "T", default_value_t = DEFAULT_STOP_THRESHOLD)]
    pub stop_norm: f64,

    #[arg(long, value_name = "N", default_value_t = DEFAULT_MAX_ITER)]
    pub max_iter: usize,

    #[arg(long, value_enum, default_value_t = Start::UnitSphere)]
    pub start: Start,

    /// Run trials on the current thread only.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Args, Debug)]
pub struct ExperimentArgs {
    #[command(flatten)]
    pub sweep: SweepArgs,

    /// Per-trial counts as CSV.
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,

    /// Median counts against λ as SVG.
    #[arg(long, value_name = "PATH")]
    pub plot: Option<PathBuf>,
}
