//! The relaxed fixed-point iteration `x_{n+1} = (1 − λ_n)x_n + λ_n·Op(x_n)`.
//!
//! [`km_run`] drives the iteration for any [`FixedPointOperator`]. The
//! operator is evaluated once per step; that image feeds the schedule, the
//! update and the residual history alike.
//!
//! Stopping criteria are checked before every update (so a start that already
//! satisfies one costs zero iterations) in the fixed order: fixed point
//! (adaptive schedules), target, norm, residual, iteration budget.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::numkernel::{distance, norm, Vector};
use crate::operators::FixedPointOperator;
use crate::schedules::{RelaxationSchedule, DEFAULT_RESIDUAL_TOL};

pub const DEFAULT_MAX_ITER: usize = 1_000_000;
pub const DEFAULT_TRAJECTORY_CAP: usize = 10_000;

/// When to stop iterating.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoppingRule {
    pub max_iter: usize,
    /// Stop once `‖x_n‖ < threshold`.
    pub norm_threshold: Option<f64>,
    /// Stop once `‖x_n − Op(x_n)‖ < threshold`.
    pub residual_threshold: Option<f64>,
    /// Stop once `‖x_n − point‖ < tol`.
    pub target: Option<Target>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Target {
    pub point: Vector,
    pub tol: f64,
}

impl StoppingRule {
    pub fn new(max_iter: usize) -> Self {
        StoppingRule {
            max_iter,
            norm_threshold: None,
            residual_threshold: None,
            target: None,
        }
    }

    pub fn norm_below(mut self, threshold: f64) -> Self {
        self.norm_threshold = Some(threshold);
        self
    }

    pub fn residual_below(mut self, threshold: f64) -> Self {
        self.residual_threshold = Some(threshold);
        self
    }

    pub fn target(mut self, point: Vector, tol: f64) -> Self {
        self.target = Some(Target { point, tol });
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iter == 0 {
            return Err(Error::Validation("max_iter must be at least 1".into()));
        }
        if self.norm_threshold.is_none() && self.residual_threshold.is_none() && self.target.is_none()
        {
            return Err(Error::Validation("no stopping criterion set".into()));
        }
        let positive = |name: &str, v: f64| {
            if v > 0.0 {
                Ok(())
            } else {
                Err(Error::Validation(format!("{name} must be positive, got {v}")))
            }
        };
        if let Some(t) = self.norm_threshold {
            positive("norm_threshold", t)?;
        }
        if let Some(t) = self.residual_threshold {
            positive("residual_threshold", t)?;
        }
        if let Some(t) = &self.target {
            positive("target tolerance", t.tol)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    NormReached,
    ResidualReached,
    TargetReached,
    AtFixedPoint,
    MaxIterExceeded,
}

impl Termination {
    pub fn converged(self) -> bool {
        self != Termination::MaxIterExceeded
    }
}

/// Knobs that rarely change between runs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub residual_tol: f64,
    pub record_trajectory: bool,
    pub trajectory_cap: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            residual_tol: DEFAULT_RESIDUAL_TOL,
            record_trajectory: false,
            trajectory_cap: DEFAULT_TRAJECTORY_CAP,
        }
    }
}

impl RunOptions {
    pub fn with_trajectory(mut self) -> Self {
        self.record_trajectory = true;
        self
    }
}

/// Outcome of one run.
///
/// `residual_history[n]` (and `distance_history[n]`, when a monitor point is
/// given) describe `x_n` for `n = 0..=iterations`; `lambda_history[n]` is the
/// parameter that produced `x_{n+1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub final_point: Vector,
    pub iterations: usize,
    pub lambda_history: Vec<f64>,
    pub residual_history: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monitor: Option<Vector>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distance_history: Option<Vec<f64>>,
    pub termination: Termination,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<Vec<Vector>>,
}

/// Runs the iteration with default [`RunOptions`].
pub fn km_run<O: FixedPointOperator + ?Sized>(
    op: &O,
    schedule: &RelaxationSchedule,
    x0: &Vector,
    stop: &StoppingRule,
    monitor: Option<&Vector>,
) -> Result<RunResult> {
    km_run_with(op, schedule, x0, stop, monitor, &RunOptions::default())
}

pub fn km_run_with<O: FixedPointOperator + ?Sized>(
    op: &O,
    schedule: &RelaxationSchedule,
    x0: &Vector,
    stop: &StoppingRule,
    monitor: Option<&Vector>,
    options: &RunOptions,
) -> Result<RunResult> {
    let d = op.dim();
    check_dim(d, x0.dim())?;
    if let Some(y) = monitor {
        check_dim(d, y.dim())?;
    }
    if let Some(t) = &stop.target {
        check_dim(d, t.point.dim())?;
    }
    stop.validate()?;
    schedule.validate()?;

    let adaptive = schedule.is_adaptive();
    // λ_x is evaluated at the reduced point z = x − P_Fix(x) (with Op(z) =
    // Op(x) − P_Fix(x)). Same value in exact arithmetic, but ⟨P_Fix x, x − Op x⟩
    // is pure rounding error that swamps the numerator once the residual
    // falls near √ε·‖x‖.
    let reduce = adaptive && !op.fixes_only_origin();
    let (mut px, mut z, mut oz) = if reduce {
        (vec![0.0; d], vec![0.0; d], vec![0.0; d])
    } else {
        (Vec::new(), Vec::new(), Vec::new())
    };
    let mut x = x0.as_slice().to_vec();
    let mut ox = vec![0.0; d];
    let mut lambda_history = Vec::new();
    let mut residual_history = Vec::new();
    let mut distance_history = monitor.map(|_| Vec::new());
    let mut trajectory = options.record_trajectory.then(Vec::new);

    let mut n = 0usize;
    let termination = loop {
        op.apply_into(&x, &mut ox);
        let res = distance(&x, &ox);
        residual_history.push(res);
        if let (Some(hist), Some(y)) = (distance_history.as_mut(), monitor) {
            hist.push(distance(&x, y.as_slice()));
        }
        if let Some(traj) = trajectory.as_mut() {
            if traj.len() < options.trajectory_cap {
                traj.push(Vector::from_raw(x.clone()));
            }
        }

        if reduce {
            op.project_fix_into(&x, &mut px);
            for i in 0..d {
                z[i] = x[i] - px[i];
                oz[i] = ox[i] - px[i];
            }
        }
        let size = if reduce { norm(&z) } else { norm(&x) };
        if adaptive && res <= options.residual_tol * (1.0 + size) {
            break Termination::AtFixedPoint;
        }
        if let Some(t) = &stop.target {
            if distance(&x, t.point.as_slice()) < t.tol {
                break Termination::TargetReached;
            }
        }
        if let Some(t) = stop.norm_threshold {
            if norm(&x) < t {
                break Termination::NormReached;
            }
        }
        if let Some(t) = stop.residual_threshold {
            if res < t {
                break Termination::ResidualReached;
            }
        }
        if n >= stop.max_iter {
            break Termination::MaxIterExceeded;
        }

        let next = if reduce {
            schedule.next_lambda(n, &z, &oz, options.residual_tol)
        } else {
            schedule.next_lambda(n, &x, &ox, options.residual_tol)
        };
        let lambda = match next {
            Ok(l) => l,
            Err(Error::AtFixedPoint) => break Termination::AtFixedPoint,
            Err(e) => return Err(e),
        };
        lambda_history.push(lambda);
        let keep = 1.0 - lambda;
        for (xi, oi) in x.iter_mut().zip(&ox) {
            *xi = keep * *xi + lambda * oi;
        }
        n += 1;
    };

    Ok(RunResult {
        final_point: Vector::from_raw(x),
        iterations: n,
        lambda_history,
        residual_history,
        monitor: monitor.cloned(),
        distance_history,
        termination,
        trajectory,
    })
}

/// `‖x − Op(x)‖`.
pub fn residual<O: FixedPointOperator + ?Sized>(op: &O, x: &Vector) -> Result<f64> {
    let ox = op.apply(x)?;
    Ok(distance(x.as_slice(), ox.as_slice()))
}

/// Whether the recorded distances to `y` never increase by more than `tol`
/// from one step to the next.
pub fn fejer_check(result: &RunResult, y: &Vector, tol: f64) -> Result<bool> {
    let history = match (&result.monitor, &result.distance_history) {
        (Some(m), Some(h)) if m == y => h,
        _ => return Err(Error::MissingHistory),
    };
    Ok(history.windows(2).all(|w| w[1] <= w[0] + tol))
}
