//! Random operator generators shared by the integration tests.
#![allow(dead_code)]

use fixpoint_core::numkernel::{spectral_norm, Matrix, Vector};
use fixpoint_core::operators::LinearOperator;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_vec(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    (0..d).map(|_| StandardNormal.sample(rng)).collect()
}

pub fn vector(v: Vec<f64>) -> Vector {
    Vector::new(v).unwrap()
}

pub fn unit_vector(rng: &mut ChaCha8Rng, d: usize) -> Vector {
    let g = gaussian_vec(rng, d);
    let n = g.iter().map(|x| x * x).sum::<f64>().sqrt();
    vector(g.into_iter().map(|x| x / n).collect())
}

pub fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_row_major(rows, cols, gaussian_vec(rng, rows * cols)).unwrap()
}

/// Random orthogonal matrix (Q factor of a Gaussian matrix).
pub fn orthogonal(rng: &mut ChaCha8Rng, d: usize) -> DMatrix<f64> {
    let g = DMatrix::from_row_slice(d, d, &gaussian_vec(rng, d * d));
    g.qr().q()
}

fn to_matrix(m: &DMatrix<f64>) -> Matrix {
    let (r, c) = m.shape();
    let mut data = Vec::with_capacity(r * c);
    for i in 0..r {
        for j in 0..c {
            data.push(m[(i, j)]);
        }
    }
    Matrix::from_row_major(r, c, data).unwrap()
}

/// Gaussian matrix rescaled to spectral norm in `]0, 1]`; a third of the
/// draws sit exactly on norm 1.
pub fn random_nonexpansive(rng: &mut ChaCha8Rng, d: usize) -> LinearOperator {
    let g = gaussian_matrix(rng, d, d);
    let s = spectral_norm(&g, 1e-12).unwrap();
    let target = if rng.random_bool(1.0 / 3.0) {
        1.0
    } else {
        rng.random_range(0.05..1.0)
    };
    LinearOperator::new(g.scale(target / s)).unwrap()
}

/// `R = Q diag(I_k, A) Qᵀ` with `‖A‖ ∈ [0.3, 0.95]`, so `Fix R` is exactly
/// the span of the first `k` columns of `Q`. Returns the operator and that
/// basis.
pub fn random_with_fix(rng: &mut ChaCha8Rng, d: usize, k: usize) -> (LinearOperator, Vec<Vector>) {
    assert!(k <= d);
    let q = orthogonal(rng, d);
    let mut block = DMatrix::<f64>::zeros(d, d);
    for i in 0..k {
        block[(i, i)] = 1.0;
    }
    if k < d {
        let m = d - k;
        let a = gaussian_matrix(rng, m, m);
        let s = spectral_norm(&a, 1e-12).unwrap();
        let scale = rng.random_range(0.3..0.95) / s;
        for i in 0..m {
            for j in 0..m {
                block[(k + i, k + j)] = a.get(i, j) * scale;
            }
        }
    }
    let r = &q * block * q.transpose();
    let basis = (0..k)
        .map(|j| vector((0..d).map(|i| q[(i, j)]).collect()))
        .collect();
    (LinearOperator::new(to_matrix(&r)).unwrap(), basis)
}

/// `R = Q diag(eigs) Qᵀ`.
pub fn symmetric_with_eigs(rng: &mut ChaCha8Rng, eigs: &[f64]) -> LinearOperator {
    let d = eigs.len();
    let q = orthogonal(rng, d);
    let r = &q * DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(eigs)) * q.transpose();
    LinearOperator::new(to_matrix(&r)).unwrap()
}

/// Random eigenvalues in `[lo, hi]` with `fixed` of them replaced by 1.
pub fn random_eigs(rng: &mut ChaCha8Rng, d: usize, lo: f64, hi: f64, fixed: usize) -> Vec<f64> {
    let u = Uniform::new_inclusive(lo, hi).unwrap();
    (0..d)
        .map(|i| if i < fixed { 1.0 } else { u.sample(rng) })
        .collect()
}

/// Random point of the span of `basis` (zero when the basis is empty).
pub fn random_in_span(rng: &mut ChaCha8Rng, basis: &[Vector], d: usize) -> Vector {
    let mut out = vec![0.0; d];
    for b in basis {
        let c: f64 = StandardNormal.sample(rng);
        for (o, bi) in out.iter_mut().zip(b.as_slice()) {
            *o += c * bi;
        }
    }
    vector(out)
}
