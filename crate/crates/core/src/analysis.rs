//! Operator diagnostics.
//!
//! For a nonexpansive linear `R` and `x ∉ Fix R`, the squared norm of the
//! relaxed point `f(λ) = ‖(1 − λ)x + λRx‖²` is a convex quadratic in `λ`
//! with vertex `λ_x = ⟨x, x − Rx⟩/‖x − Rx‖²`. Its infimum over all non-fixed
//! `x`, `λ̄`, determines the modulus of averagedness `κ(R) = 1/(2λ̄)`.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::numkernel::{dot, norm, split_right_singular, Vector, DEFAULT_RANK_TOL};
use crate::operators::{FixedPointOperator, LinearOperator};
use crate::par::{min_indexed, Execution};
use crate::random::{gaussian, stream_rng};
use crate::schedules::{lambda_opt, lambda_opt_slices, DEFAULT_RESIDUAL_TOL};

/// Largest dimension for which [`LambdaBarMethod::EigenExact`] is the default.
pub const EIGEN_EXACT_MAX_DIM: usize = 64;
pub const DEFAULT_SAMPLE_COUNT: usize = 100_000;
pub const DEFAULT_PROFILE_POINTS: usize = 101;

/// `f(λ) = ‖T_λ x‖²` sampled on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormProfile {
    pub lambdas: Vec<f64>,
    pub values: Vec<f64>,
    /// `λ_x`, the vertex of the quadratic.
    pub minimizer: f64,
    /// `‖x‖² − ⟨x, x − Rx⟩²/‖x − Rx‖²`.
    pub min_value: f64,
}

/// `n` uniform points on `[0, 2λ_x]`.
pub fn default_profile_grid(lambda_x: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n)
        .map(|i| 2.0 * lambda_x * i as f64 / (n - 1) as f64)
        .collect()
}

pub fn norm_profile(r: &LinearOperator, x: &Vector, grid: &[f64]) -> Result<NormProfile> {
    let rx = r.apply(x)?;
    let minimizer = lambda_opt(x, &rx, DEFAULT_RESIDUAL_TOL)?;
    let diff: Vec<f64> = x.as_slice().iter().zip(rx.as_slice()).map(|(a, b)| a - b).collect();
    let cross = dot(x.as_slice(), &diff);
    let min_value = x.norm_squared() - cross * cross / dot(&diff, &diff);
    let values = grid
        .iter()
        .map(|&lambda| {
            x.as_slice()
                .iter()
                .zip(rx.as_slice())
                .map(|(a, b)| {
                    let t = (1.0 - lambda) * a + lambda * b;
                    t * t
                })
                .sum()
        })
        .collect();
    Ok(NormProfile {
        lambdas: grid.to_vec(),
        values,
        minimizer,
        min_value,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaBarMethod {
    /// Smallest eigenvalue of the reduced symmetric pencil; exact up to rounding.
    EigenExact,
    /// Minimum of `λ_x` over random directions; an upper bound on `λ̄`.
    Sampled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LambdaBarConfig {
    /// `None` picks `EigenExact` up to [`EIGEN_EXACT_MAX_DIM`], `Sampled` above.
    pub method: Option<LambdaBarMethod>,
    pub sample_count: usize,
    pub seed: u64,
    pub execution: Execution,
}

impl Default for LambdaBarConfig {
    fn default() -> Self {
        LambdaBarConfig {
            method: None,
            sample_count: DEFAULT_SAMPLE_COUNT,
            seed: 0,
            execution: Execution::default(),
        }
    }
}

impl LambdaBarConfig {
    pub fn exact() -> Self {
        LambdaBarConfig {
            method: Some(LambdaBarMethod::EigenExact),
            ..Default::default()
        }
    }

    pub fn sampled(sample_count: usize, seed: u64) -> Self {
        LambdaBarConfig {
            method: Some(LambdaBarMethod::Sampled),
            sample_count,
            seed,
            ..Default::default()
        }
    }
}

/// `λ̄` and `κ = 1/(2λ̄)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AveragednessReport {
    pub lambda_bar: f64,
    pub kappa: f64,
    pub method: LambdaBarMethod,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_count: Option<usize>,
}

/// Infimum of `λ_x` over `x ∉ Fix R`.
pub fn lambda_bar(r: &LinearOperator, config: &LambdaBarConfig) -> Result<AveragednessReport> {
    let m = r.matrix().identity_minus()?;
    let (_, cokernel) = split_right_singular(&m, DEFAULT_RANK_TOL)?;
    if cokernel.is_empty() {
        return Err(Error::IdentityOperator);
    }
    let method = config.method.unwrap_or(if r.dim() <= EIGEN_EXACT_MAX_DIM {
        LambdaBarMethod::EigenExact
    } else {
        LambdaBarMethod::Sampled
    });
    let (lambda_bar, sample_count) = match method {
        LambdaBarMethod::EigenExact => (eigen_exact(&m, &cokernel)?, None),
        LambdaBarMethod::Sampled => (sampled(r, config)?, Some(config.sample_count)),
    };
    Ok(AveragednessReport {
        lambda_bar,
        kappa: 1.0 / (2.0 * lambda_bar),
        method,
        sample_count,
    })
}

/// With `M = Id − R` and right singular pairs `(v_i, σ_i)` spanning the
/// complement of `ker M`, write `x = Σ (z_i/σ_i) v_i`. Then `‖Mx‖² = ‖z‖²`
/// and `⟨x, Mx⟩ = zᵀCz` with `C_ij = sym(v_iᵀ M v_j)/(σ_i σ_j)`, so the
/// infimum of `λ_x` is the smallest eigenvalue of `C`.
///
/// Restricting to the complement loses nothing: for nonexpansive linear `R`,
/// `ker M = ker Mᵀ`, so a fixed component changes neither numerator nor
/// denominator.
fn eigen_exact(m: &crate::numkernel::Matrix, cokernel: &[(Vector, f64)]) -> Result<f64> {
    let k = cokernel.len();
    let d = m.rows();
    let images: Vec<Vec<f64>> = cokernel
        .iter()
        .map(|(v, _)| {
            let mut out = vec![0.0; d];
            m.mul_slice_into(v.as_slice(), &mut out);
            out
        })
        .collect();
    let mut c = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        for j in 0..=i {
            let (vi, si) = &cokernel[i];
            let (vj, sj) = &cokernel[j];
            let sym = 0.5 * (dot(vi.as_slice(), &images[j]) + dot(vj.as_slice(), &images[i]));
            let entry = sym / (si * sj);
            c[(i, j)] = entry;
            c[(j, i)] = entry;
        }
    }
    let eig = SymmetricEigen::try_new(c, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numeric("symmetric eigensolver did not converge".into()))?;
    Ok(eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min))
}

fn sampled(r: &LinearOperator, config: &LambdaBarConfig) -> Result<f64> {
    if config.sample_count == 0 {
        return Err(Error::Validation("sample_count must be positive".into()));
    }
    let d = r.dim();
    let basis = r.fix_basis();
    let best = min_indexed(config.sample_count, config.execution, |i| {
        let mut rng = stream_rng(config.seed, i as u64);
        let g = gaussian(&mut rng, d);
        let mut fixed = vec![0.0; d];
        basis.project_slice_into(&g, &mut fixed);
        let mut x: Vec<f64> = g.iter().zip(&fixed).map(|(a, b)| a - b).collect();
        let len = norm(&x);
        if len == 0.0 {
            return None;
        }
        x.iter_mut().for_each(|v| *v /= len);
        let mut rx = vec![0.0; d];
        r.apply_into(&x, &mut rx);
        lambda_opt_slices(&x, &rx, DEFAULT_RANK_TOL).ok()
    });
    best.ok_or_else(|| Error::Numeric("no sampled direction left the fixed-point set".into()))
}

/// `λ̄ > ½ + tol`, i.e. `R` is averaged.
pub fn is_averaged(report: &AveragednessReport, tol: f64) -> bool {
    report.lambda_bar > 0.5 + tol
}

/// `‖T_λ T_μ x − T_μ T_λ x‖`.
pub fn commutation_defect(r: &LinearOperator, lambda: f64, mu: f64, x: &Vector) -> Result<f64> {
    let a = r.relax(lambda, &r.relax(mu, x)?)?;
    let b = r.relax(mu, &r.relax(lambda, x)?)?;
    a.distance(&b)
}

/// Compares `‖T_{λ_n}⋯T_{λ_0}x_0 − y‖` with `‖T_{μ_n}⋯T_{μ_0}x_0 − y‖` at the
/// final index; true when the first exceeds the second by at most `tol`.
pub fn product_domination_check(
    r: &LinearOperator,
    lambdas: &[f64],
    mus: &[f64],
    x0: &Vector,
    y: &Vector,
    tol: f64,
) -> Result<bool> {
    check_dim(r.dim(), x0.dim())?;
    check_dim(r.dim(), y.dim())?;
    if lambdas.len() != mus.len() {
        return Err(Error::Validation(format!(
            "parameter lists differ in length ({} vs {})",
            lambdas.len(),
            mus.len()
        )));
    }
    let ry = r.apply(y)?;
    let defect = y.distance(&ry)?;
    if defect > 1e-8 * (1.0 + y.norm()) {
        return Err(Error::YNotFixed(defect));
    }
    let run = |params: &[f64]| -> Result<Vector> {
        params.iter().try_fold(x0.clone(), |x, &l| r.relax(l, &x))
    };
    let left = run(lambdas)?.distance(y)?;
    let right = run(mus)?.distance(y)?;
    Ok(left <= right + tol)
}
