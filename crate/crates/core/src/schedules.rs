//! Relaxation schedules: the sequence `λ_n` fed to the iteration driver.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{norm, Vector};

/// Below `residual_tol·(1 + ‖x‖)` the residual `‖x − Rx‖` counts as zero.
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-12;

/// Source of relaxation parameters.
///
/// JSON form: `{"type": "constant", "lambda": 0.5}`,
/// `{"type": "explicit", "values": [...], "fallback": 0.5}`,
/// `{"type": "banded_random", "epsilon": 0.1, "seed": 42}`,
/// `{"type": "adaptive", "epsilon": 0.01}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum RelaxationSchedule {
    Constant { lambda: f64 },
    Explicit { values: Vec<f64>, fallback: f64 },
    /// Uniform draws from `[ε, 1 − ε]`, keyed by `(seed, n)`.
    BandedRandom { epsilon: f64, seed: u64 },
    /// `λ_n = min{λ_{x_n}, 1 − ε}` with `λ_x` the minimizer of `‖T_λ x‖`.
    Adaptive { epsilon: f64 },
}

impl RelaxationSchedule {
    pub fn constant(lambda: f64) -> Result<Self> {
        let s = RelaxationSchedule::Constant { lambda };
        s.validate()?;
        Ok(s)
    }

    pub fn explicit(values: Vec<f64>, fallback: f64) -> Result<Self> {
        let s = RelaxationSchedule::Explicit { values, fallback };
        s.validate()?;
        Ok(s)
    }

    pub fn banded_random(epsilon: f64, seed: u64) -> Result<Self> {
        let s = RelaxationSchedule::BandedRandom { epsilon, seed };
        s.validate()?;
        Ok(s)
    }

    pub fn adaptive(epsilon: f64) -> Result<Self> {
        let s = RelaxationSchedule::Adaptive { epsilon };
        s.validate()?;
        Ok(s)
    }

    /// Structural checks: finite values, and `ε ∈ ]0, ½]` for the banded
    /// and adaptive variants. Values outside `]0,1[` are legal here
    /// (overrelaxation); [`validate_band`] is the stricter check.
    pub fn validate(&self) -> Result<()> {
        match self {
            RelaxationSchedule::Constant { lambda } => finite("lambda", *lambda),
            RelaxationSchedule::Explicit { values, fallback } => {
                if let Some(i) = values.iter().position(|v| !v.is_finite()) {
                    return Err(Error::Validation(format!("values[{i}] is not finite")));
                }
                finite("fallback", *fallback)
            }
            RelaxationSchedule::BandedRandom { epsilon, .. }
            | RelaxationSchedule::Adaptive { epsilon } => {
                if *epsilon > 0.0 && *epsilon <= 0.5 {
                    Ok(())
                } else {
                    Err(Error::Validation(format!("epsilon must lie in ]0, 1/2], got {epsilon}")))
                }
            }
        }
    }

    pub fn is_adaptive(&self) -> bool {
        matches!(self, RelaxationSchedule::Adaptive { .. })
    }

    /// Interval guaranteed to contain every emitted value.
    pub fn band(&self) -> (f64, f64) {
        match self {
            RelaxationSchedule::Constant { lambda } => (*lambda, *lambda),
            RelaxationSchedule::Explicit { values, fallback } => values
                .iter()
                .fold((*fallback, *fallback), |(lo, hi), &v| (lo.min(v), hi.max(v))),
            RelaxationSchedule::BandedRandom { epsilon, .. }
            | RelaxationSchedule::Adaptive { epsilon } => (*epsilon, 1.0 - *epsilon),
        }
    }

    /// Parameter for step `n`, given the iterate `x` and `Rx` (the image
    /// under the operator).
    pub fn next_lambda(&self, n: usize, x: &[f64], rx: &[f64], residual_tol: f64) -> Result<f64> {
        Ok(match self {
            RelaxationSchedule::Constant { lambda } => *lambda,
            RelaxationSchedule::Explicit { values, fallback } => {
                values.get(n).copied().unwrap_or(*fallback)
            }
            RelaxationSchedule::BandedRandom { epsilon, seed } => {
                banded_draw(*seed, n as u64, *epsilon)
            }
            RelaxationSchedule::Adaptive { epsilon } => {
                let upper = 1.0 - epsilon;
                let step = lambda_opt_slices(x, rx, residual_tol)?.min(upper);
                if step < *epsilon {
                    log::debug!("adaptive relaxation {step} clamped up to {epsilon} at step {n}");
                    *epsilon
                } else {
                    step
                }
            }
        })
    }
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::Validation(format!("{name} is not finite")))
    }
}

/// Deterministic uniform draw in `[ε, 1 − ε]` for index `n`: a ChaCha stream
/// keyed by `seed`, one stream per index.
fn banded_draw(seed: u64, n: u64, epsilon: f64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(n);
    let u: f64 = rng.random();
    epsilon + (1.0 - 2.0 * epsilon) * u
}

/// `⟨x, x − Rx⟩ / ‖x − Rx‖²`, the minimizer of `λ ↦ ‖(1 − λ)x + λRx‖²`.
///
/// Returns [`Error::AtFixedPoint`] when `‖x − Rx‖ ≤ residual_tol·(1 + ‖x‖)`.
pub fn lambda_opt(x: &Vector, rx: &Vector, residual_tol: f64) -> Result<f64> {
    crate::error::check_dim(x.dim(), rx.dim())?;
    lambda_opt_slices(x.as_slice(), rx.as_slice(), residual_tol)
}

pub(crate) fn lambda_opt_slices(x: &[f64], rx: &[f64], residual_tol: f64) -> Result<f64> {
    let mut num = 0.0;
    let mut den = 0.0;
    for (a, b) in x.iter().zip(rx) {
        let d = a - b;
        num += a * d;
        den += d * d;
    }
    if den.sqrt() <= residual_tol * (1.0 + norm(x)) {
        return Err(Error::AtFixedPoint);
    }
    Ok(num / den)
}

/// Largest `ε > 0` with every emitted value in `[ε, 1 − ε]`.
///
/// Rejects schedules whose values leave `]0,1[`; the offending index for the
/// fallback of an explicit schedule is `values.len()`.
pub fn validate_band(schedule: &RelaxationSchedule) -> Result<f64> {
    schedule.validate()?;
    let margin = |index: usize, v: f64| -> Result<f64> {
        if v > 0.0 && v < 1.0 {
            Ok(v.min(1.0 - v))
        } else {
            Err(Error::BandViolation { index, value: v })
        }
    };
    match schedule {
        RelaxationSchedule::Constant { lambda } => margin(0, *lambda),
        RelaxationSchedule::Explicit { values, fallback } => {
            let mut eps = f64::INFINITY;
            for (i, &v) in values.iter().enumerate() {
                eps = eps.min(margin(i, v)?);
            }
            Ok(eps.min(margin(values.len(), *fallback)?))
        }
        RelaxationSchedule::BandedRandom { epsilon, .. }
        | RelaxationSchedule::Adaptive { epsilon } => Ok(*epsilon),
    }
}
