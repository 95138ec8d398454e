//! Constant-λ sweeps against the adaptive schedule over seeded random starts.
//!
//! For every grid value `λ` and every trial the constant schedule is run
//! from the trial's start until `‖x_n‖ < threshold` (or, when the fixed-point
//! set is not `{0}`, until the iterate is within the threshold of the
//! projection of the start). The adaptive schedule is run from the same starts.
//! Iteration counts are the number of operator applications performed before
//! the criterion first holds.

mod output;

pub use output::{emit_csv, emit_plot, write_csv, write_plot};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::iteration::{km_run, StoppingRule, DEFAULT_MAX_ITER};
use crate::numkernel::{norm, Vector};
use crate::operators::{FixedPointOperator, Operator, OperatorSpec};
use crate::par::{map_indexed, Execution};
use crate::random::{gaussian, stream_rng};
use crate::schedules::RelaxationSchedule;

pub const DEFAULT_TRIALS: usize = 100;
pub const DEFAULT_STOP_THRESHOLD: f64 = 1e-6;
pub const DEFAULT_EPSILON_CLIP: f64 = 1e-6;
pub const DEFAULT_GRID_POINTS: usize = 101;

/// Starts with a smaller norm are redrawn.
const MIN_START_NORM: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum StartDistribution {
    #[default]
    UnitSphere,
    UnitBall,
    Gaussian,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub num_trials: usize,
    pub seed: u64,
    pub stop_threshold: f64,
    /// `ε` of the adaptive schedule; also the margin of the default grid.
    pub epsilon_clip: f64,
    pub lambda_grid: Vec<f64>,
    pub max_iter: usize,
    pub start_distribution: StartDistribution,
    #[serde(skip)]
    pub execution: Execution,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            num_trials: DEFAULT_TRIALS,
            seed: 0,
            stop_threshold: DEFAULT_STOP_THRESHOLD,
            epsilon_clip: DEFAULT_EPSILON_CLIP,
            lambda_grid: default_grid(DEFAULT_EPSILON_CLIP, DEFAULT_GRID_POINTS),
            max_iter: DEFAULT_MAX_ITER,
            start_distribution: StartDistribution::UnitSphere,
            execution: Execution::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.num_trials == 0 {
            return Err(Error::Validation("num_trials must be at least 1".into()));
        }
        if !(self.stop_threshold > 0.0) {
            return Err(Error::Validation("stop_threshold must be positive".into()));
        }
        if !(self.epsilon_clip > 0.0 && self.epsilon_clip <= 0.5) {
            return Err(Error::Validation("epsilon_clip must lie in ]0, 1/2]".into()));
        }
        if self.max_iter == 0 {
            return Err(Error::Validation("max_iter must be at least 1".into()));
        }
        if let Some(l) = self.lambda_grid.iter().find(|&&l| !(l > 0.0 && l < 1.0)) {
            return Err(Error::Validation(format!("grid value {l} outside ]0,1[")));
        }
        Ok(())
    }
}

/// `points` uniform values from `ε` to `1 − ε`, both endpoints exact.
pub fn default_grid(epsilon: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.5],
        _ => {
            let hi = 1.0 - epsilon;
            let step = (hi - epsilon) / (points - 1) as f64;
            let mut grid: Vec<f64> = (0..points).map(|i| epsilon + step * i as f64).collect();
            grid[points - 1] = hi;
            grid
        }
    }
}

/// Start for `trial`; a deterministic function of `(seed, trial)`.
pub fn random_start(seed: u64, trial: usize, dim: usize, distribution: StartDistribution) -> Vector {
    let mut rng = stream_rng(seed, trial as u64);
    loop {
        let g = gaussian(&mut rng, dim.max(1));
        let len = norm(&g);
        let v: Vec<f64> = match distribution {
            StartDistribution::Gaussian => g,
            StartDistribution::UnitSphere => g.iter().map(|x| x / len).collect(),
            StartDistribution::UnitBall => {
                let u: f64 = rand::Rng::random(&mut rng);
                let radius = u.powf(1.0 / dim as f64);
                g.iter().map(|x| x / len * radius).collect()
            }
        };
        if norm(&v) >= MIN_START_NORM && v.iter().all(|x| x.is_finite()) {
            return Vector::from_raw(v);
        }
    }
}

/// Per-trial counts and their summary statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub iteration_counts: Vec<usize>,
    pub converged: Vec<bool>,
    pub median: f64,
    pub mean: f64,
    pub max: usize,
    /// Trials that exhausted the iteration budget.
    pub failures: usize,
}

impl TrialSummary {
    fn from_outcomes(outcomes: Vec<(usize, bool)>) -> Self {
        let (iteration_counts, converged): (Vec<usize>, Vec<bool>) = outcomes.into_iter().unzip();
        let mut sorted = iteration_counts.clone();
        sorted.sort_unstable();
        let n = sorted.len();
        let median = if n == 0 {
            f64::NAN
        } else if n % 2 == 1 {
            sorted[n / 2] as f64
        } else {
            0.5 * (sorted[n / 2 - 1] + sorted[n / 2]) as f64
        };
        let mean = iteration_counts.iter().sum::<usize>() as f64 / n.max(1) as f64;
        TrialSummary {
            max: sorted.last().copied().unwrap_or(0),
            failures: converged.iter().filter(|c| !**c).count(),
            iteration_counts,
            converged,
            median,
            mean,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaSummary {
    pub lambda: f64,
    #[serde(flatten)]
    pub summary: TrialSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub operator: OperatorSpec,
    pub per_lambda: Vec<LambdaSummary>,
    pub abbr: TrialSummary,
    /// Grid value with the smallest median count (ties: smaller max, then
    /// smaller mean, then the earlier grid value).
    pub lambda_opt_empirical: f64,
    pub config_echo: ExperimentConfig,
}

fn stopping_rule(op: &Operator, x0: &Vector, config: &ExperimentConfig) -> Result<StoppingRule> {
    let rule = StoppingRule::new(config.max_iter);
    Ok(if op.fixes_only_origin() {
        rule.norm_below(config.stop_threshold)
    } else {
        rule.target(op.project_fix(x0)?, config.stop_threshold)
    })
}

fn run_trial(
    op: &Operator,
    schedule: &RelaxationSchedule,
    config: &ExperimentConfig,
    trial: usize,
) -> Result<(usize, bool)> {
    let x0 = random_start(config.seed, trial, op.dim(), config.start_distribution);
    let stop = stopping_rule(op, &x0, config)?;
    let out = km_run(op, schedule, &x0, &stop, None)?;
    Ok((out.iterations, out.termination.converged()))
}

/// Constant-λ runs for every grid value and trial.
pub fn run_bbr_sweep(op: &Operator, config: &ExperimentConfig) -> Result<Vec<LambdaSummary>> {
    config.validate()?;
    let trials = config.num_trials;
    let schedules: Vec<RelaxationSchedule> = config
        .lambda_grid
        .iter()
        .map(|&l| RelaxationSchedule::constant(l))
        .collect::<Result<_>>()?;
    let outcomes = map_indexed(schedules.len() * trials, config.execution, |k| {
        run_trial(op, &schedules[k / trials], config, k % trials)
    });
    let outcomes: Vec<(usize, bool)> = outcomes.into_iter().collect::<Result<_>>()?;
    Ok(config
        .lambda_grid
        .iter()
        .zip(outcomes.chunks(trials))
        .map(|(&lambda, chunk)| LambdaSummary {
            lambda,
            summary: TrialSummary::from_outcomes(chunk.to_vec()),
        })
        .collect())
}

/// Adaptive runs with `ε = epsilon_clip`, one per trial, on the sweep's starts.
pub fn run_abbr(op: &Operator, config: &ExperimentConfig) -> Result<TrialSummary> {
    config.validate()?;
    let schedule = RelaxationSchedule::adaptive(config.epsilon_clip)?;
    let outcomes = map_indexed(config.num_trials, config.execution, |t| {
        run_trial(op, &schedule, config, t)
    });
    Ok(TrialSummary::from_outcomes(
        outcomes.into_iter().collect::<Result<_>>()?,
    ))
}

/// Grid value minimizing the median count. Integer counts tie often; ties
/// go to the smaller worst-trial count (the slowest contraction), then the
/// smaller mean, then the earlier grid value.
pub fn empirical_argmin(per_lambda: &[LambdaSummary]) -> Option<f64> {
    per_lambda
        .iter()
        .min_by(|a, b| {
            let (a, b) = (&a.summary, &b.summary);
            a.median
                .total_cmp(&b.median)
                .then(a.max.cmp(&b.max))
                .then(a.mean.total_cmp(&b.mean))
        })
        .map(|s| s.lambda)
}

pub fn run_experiment(op: &Operator, config: &ExperimentConfig) -> Result<ExperimentReport> {
    let per_lambda = run_bbr_sweep(op, config)?;
    let abbr = run_abbr(op, config)?;
    let lambda_opt_empirical = empirical_argmin(&per_lambda)
        .ok_or_else(|| Error::Validation("lambda grid is empty".into()))?;
    Ok(ExperimentReport {
        operator: OperatorSpec::from(op.clone()),
        per_lambda,
        abbr,
        lambda_opt_empirical,
        config_echo: config.clone(),
    })
}
