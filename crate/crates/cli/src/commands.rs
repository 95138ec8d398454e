use std::fs;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use fixpoint_core::analysis::{is_averaged, lambda_bar, LambdaBarConfig};
use fixpoint_core::experiments::{
    default_grid, emit_csv, emit_plot, random_start, run_abbr, run_bbr_sweep, run_experiment,
    ExperimentConfig, StartDistribution, TrialSummary,
};
use fixpoint_core::iteration::{km_run_with, RunOptions, StoppingRule};
use fixpoint_core::numkernel::Vector;
use fixpoint_core::operators::{FixedPointOperator, Operator, OperatorSpec};
use fixpoint_core::par::Execution;
use fixpoint_core::schedules::RelaxationSchedule;
use fixpoint_core::Error;

use crate::args::{CheckArgs, ExperimentArgs, OperatorArgs, RunArgs, ScheduleArgs, Start, SweepArgs};

/// What a command hands back to `main`: JSON for stdout, a one-line summary
/// for stderr and the exit code.
pub struct Output {
    pub json: Value,
    pub summary: String,
    pub code: u8,
}

impl Output {
    fn ok(json: Value, summary: String) -> Self {
        Output { json, summary, code: 0 }
    }
}

fn operator_spec(args: &OperatorArgs) -> Result<OperatorSpec> {
    if let Some(path) = &args.operator {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read operator file {}", path.display()))?;
        return serde_json::from_str(&text)
            .with_context(|| format!("invalid operator file {}", path.display()));
    }
    let diag = args.diag.as_ref().expect("clap requires --operator or --diag");
    let mut spec = OperatorSpec::diagonal(diag);
    spec.offset = args.offset.clone();
    Ok(spec)
}

fn load_operator(args: &OperatorArgs) -> Result<Operator> {
    let spec = operator_spec(args)?;
    Ok(spec.build()?)
}

fn load_schedule(args: &ScheduleArgs) -> Result<RelaxationSchedule> {
    let schedule = match (&args.schedule, args.lambda, args.adaptive) {
        (Some(path), _, _) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read schedule file {}", path.display()))?;
            let s: RelaxationSchedule = serde_json::from_str(&text)
                .with_context(|| format!("invalid schedule file {}", path.display()))?;
            s.validate()?;
            s
        }
        (None, Some(l), _) => RelaxationSchedule::constant(l)?,
        (None, None, Some(eps)) => RelaxationSchedule::adaptive(eps)?,
        (None, None, None) => unreachable!("clap requires one schedule flag"),
    };
    Ok(schedule)
}

fn vector(values: &[f64], what: &str, dim: usize) -> Result<Vector> {
    if values.len() != dim {
        bail!("{what}: expected {dim} entries, got {}", values.len());
    }
    Vector::new(values.to_vec()).with_context(|| format!("{what}: invalid entries"))
}

pub fn check(args: &CheckArgs) -> Result<Output> {
    let spec = operator_spec(&args.operator)?;
    let op = match spec.build() {
        Ok(op) => op,
        Err(Error::ExpansiveOperator(norm)) => {
            return Ok(Output {
                json: json!({
                    "nonexpansive": false,
                    "spectral_norm": norm,
                    "fix_dim": null,
                    "lambda_bar": null,
                    "kappa": null,
                    "averaged": false,
                }),
                summary: format!("expansive: spectral norm {norm} > 1"),
                code: 2,
            });
        }
        Err(e) => return Err(e.into()),
    };
    let r = op.linear_part();
    let config = LambdaBarConfig {
        seed: args.seed,
        ..LambdaBarConfig::default()
    };
    let (lambda, kappa, averaged) = match lambda_bar(r, &config) {
        Ok(rep) => (json!(rep.lambda_bar), json!(rep.kappa), is_averaged(&rep, 1e-9)),
        // R = Id is averaged for every κ; λ̄ has no finite value.
        Err(Error::IdentityOperator) => (Value::Null, Value::Null, true),
        Err(e) => return Err(e.into()),
    };
    let mut json = json!({
        "nonexpansive": true,
        "spectral_norm": r.spectral_norm(),
        "fix_dim": r.fix_basis().len(),
        "lambda_bar": lambda,
        "kappa": kappa,
        "averaged": averaged,
    });
    if let Operator::Affine(s) = &op {
        json["anchor"] = json!(s.anchor());
    }
    let summary = format!(
        "nonexpansive, ‖R‖ = {:.6}, dim Fix = {}, λ̄ = {lambda}, κ = {kappa}, averaged: {averaged}",
        r.spectral_norm(),
        r.fix_basis().len()
    );
    Ok(Output::ok(json, summary))
}

pub fn run(args: &RunArgs, verbose: bool) -> Result<Output> {
    let op = load_operator(&args.operator)?;
    let schedule = load_schedule(&args.schedule)?;
    let d = op.dim();
    let x0 = match &args.x0 {
        Some(v) => vector(v, "--x0", d)?,
        None => random_start(args.seed.unwrap_or(0), 0, d, StartDistribution::UnitSphere),
    };
    let mut stop = StoppingRule::new(args.max_iter);
    if let Some(t) = args.stop_norm {
        stop = stop.norm_below(t);
    }
    if let Some(t) = args.stop_residual {
        stop = stop.residual_below(t);
    }
    if let Some(p) = &args.target {
        stop = stop.target(vector(p, "--target", d)?, args.target_tol);
    }
    if stop.norm_threshold.is_none() && stop.residual_threshold.is_none() && stop.target.is_none() {
        stop = stop.residual_below(1e-10);
    }
    let out = km_run_with(&op, &schedule, &x0, &stop, None, &RunOptions::default())?;
    let mut json = json!({
        "final_point": out.final_point,
        "iterations": out.iterations,
        "termination": out.termination,
        "converged": out.termination.converged(),
        "final_residual": out.residual_history.last(),
    });
    if verbose {
        json["lambda_history"] = json!(out.lambda_history);
        json["residual_history"] = json!(out.residual_history);
    }
    let summary = format!(
        "{:?} after {} iterations, final residual {:.3e}",
        out.termination,
        out.iterations,
        out.residual_history.last().copied().unwrap_or(f64::NAN)
    );
    Ok(Output::ok(json, summary))
}

fn experiment_config(args: &SweepArgs) -> ExperimentConfig {
    ExperimentConfig {
        num_trials: args.trials,
        seed: args.seed,
        stop_threshold: args.stop_norm,
        epsilon_clip: args.epsilon,
        lambda_grid: default_grid(args.epsilon, args.grid),
        max_iter: args.max_iter,
        start_distribution: match args.start {
            Start::UnitSphere => StartDistribution::UnitSphere,
            Start::UnitBall => StartDistribution::UnitBall,
            Start::Gaussian => StartDistribution::Gaussian,
        },
        execution: if args.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        },
    }
}

pub fn sweep(args: &SweepArgs) -> Result<Output> {
    let op = load_operator(&args.operator)?;
    let rows = run_bbr_sweep(&op, &experiment_config(args))?;
    let best = rows
        .iter()
        .min_by(|a, b| a.summary.median.total_cmp(&b.summary.median))
        .map(|r| (r.lambda, r.summary.median));
    let summary = match best {
        Some((l, m)) => format!("{} grid values, best median {m} at λ = {l}", rows.len()),
        None => "empty grid".to_string(),
    };
    Ok(Output::ok(json!(rows), summary))
}

pub fn abbr(args: &SweepArgs) -> Result<Output> {
    let op = load_operator(&args.operator)?;
    let s = run_abbr(&op, &experiment_config(args))?;
    let summary = format!("adaptive median {} (max {}, {} failures)", s.median, s.max, s.failures);
    Ok(Output::ok(json!(s), summary))
}

fn stats(s: &TrialSummary) -> Value {
    json!({ "median": s.median, "mean": s.mean, "max": s.max, "failures": s.failures })
}

pub fn experiment(args: &ExperimentArgs) -> Result<Output> {
    let op = load_operator(&args.sweep.operator)?;
    let report = run_experiment(&op, &experiment_config(&args.sweep))?;
    if let Some(path) = &args.csv {
        emit_csv(&report, path).with_context(|| format!("cannot write {}", path.display()))?;
    }
    if let Some(path) = &args.plot {
        emit_plot(&report, path).with_context(|| format!("cannot write {}", path.display()))?;
    }
    let bbr: Vec<Value> = report
        .per_lambda
        .iter()
        .map(|r| {
            let mut v = stats(&r.summary);
            v["lambda"] = json!(r.lambda);
            v
        })
        .collect();
    let best = report
        .per_lambda
        .iter()
        .map(|r| r.summary.median)
        .fold(f64::INFINITY, f64::min);
    let json = json!({
        "operator": report.operator,
        "lambda_opt_empirical": report.lambda_opt_empirical,
        "abbr": stats(&report.abbr),
        "bbr": bbr,
        "csv": args.csv,
        "plot": args.plot,
    });
    let summary = format!(
        "empirical λ_opt = {}, best BBR median {best}, aBBR median {}",
        report.lambda_opt_empirical, report.abbr.median
    );
    Ok(Output::ok(json, summary))
}
