//! Nonexpansive linear and affine operators and their relaxations.
//!
//! A [`LinearOperator`] is a square matrix `R` certified to satisfy
//! `‖R‖ ≤ 1` (up to a small tolerance) together with a cached orthonormal
//! basis of `Fix R = ker(Id − R)`. An [`AffineOperator`] adds an offset `b`
//! and stores an anchor `a` with `(Id − R)a = b`, so that `Sx = a + R(x − a)`.
//!
//! The relaxation of an operator `Op` with parameter `λ` is
//! `T_λ x = (1 − λ)x + λ·Op(x)`.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::numkernel::{
    least_squares_min_norm, null_space_basis, spectral_norm, Matrix, OrthonormalBasis,
    Vector, DEFAULT_NORM_TOL, DEFAULT_RANK_TOL,
};

/// Slack allowed above spectral norm 1 when certifying nonexpansiveness.
pub const DEFAULT_NONEXP_TOL: f64 = 1e-8;

/// Relative residual bound for accepting an affine anchor.
pub const DEFAULT_ANCHOR_TOL: f64 = 1e-8;

/// Operators the iteration driver can relax.
pub trait FixedPointOperator: Send + Sync {
    fn dim(&self) -> usize;

    /// `out = Op(x)`; slice lengths must equal [`dim`](Self::dim).
    fn apply_into(&self, x: &[f64], out: &mut [f64]);

    /// Nearest point of the fixed-point set.
    fn project_fix(&self, x: &Vector) -> Result<Vector>;

    /// True when the fixed-point set is exactly `{0}`.
    fn fixes_only_origin(&self) -> bool;

    /// `out = P_Fix(x)` without allocating.
    fn project_fix_into(&self, x: &[f64], out: &mut [f64]);

    fn apply(&self, x: &Vector) -> Result<Vector> {
        check_dim(self.dim(), x.dim())?;
        let mut out = vec![0.0; self.dim()];
        self.apply_into(x.as_slice(), &mut out);
        Ok(Vector::from_raw(out))
    }

    /// `(1 − λ)x + λ·Op(x)`.
    fn relax(&self, lambda: f64, x: &Vector) -> Result<Vector> {
        let ox = self.apply(x)?;
        Ok(Vector::from_raw(relax_combine(lambda, x.as_slice(), ox.as_slice())))
    }
}

#[inline]
pub(crate) fn relax_combine(lambda: f64, x: &[f64], ox: &[f64]) -> Vec<f64> {
    x.iter()
        .zip(ox)
        .map(|(a, b)| (1.0 - lambda) * a + lambda * b)
        .collect()
}

/// Certified nonexpansive linear map with its fixed-point subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOperator {
    matrix: Matrix,
    fix_basis: OrthonormalBasis,
    certificate: f64,
}

impl LinearOperator {
    /// Certifies `matrix` with the default tolerances.
    pub fn new(matrix: Matrix) -> Result<Self> {
        make_linear(matrix, DEFAULT_NONEXP_TOL, DEFAULT_RANK_TOL)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn fix_basis(&self) -> &OrthonormalBasis {
        &self.fix_basis
    }

    /// The spectral norm computed at construction.
    pub fn spectral_norm(&self) -> f64 {
        self.certificate
    }
}

impl FixedPointOperator for LinearOperator {
    fn dim(&self) -> usize {
        self.matrix.rows()
    }

    #[inline]
    fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        self.matrix.mul_slice_into(x, out);
    }

    fn project_fix(&self, x: &Vector) -> Result<Vector> {
        project_fix(self, x)
    }

    fn fixes_only_origin(&self) -> bool {
        self.fix_basis.is_empty()
    }

    fn project_fix_into(&self, x: &[f64], out: &mut [f64]) {
        self.fix_basis.project_slice_into(x, out);
    }
}

/// Builds a [`LinearOperator`], rejecting matrices with spectral norm above
/// `1 + nonexp_tol`.
pub fn make_linear(matrix: Matrix, nonexp_tol: f64, rank_tol: f64) -> Result<LinearOperator> {
    if !matrix.is_square() {
        return Err(Error::NonSquare {
            rows: matrix.rows(),
            cols: matrix.cols(),
        });
    }
    if !(nonexp_tol > 0.0) || !(rank_tol > 0.0) {
        return Err(Error::Validation("tolerances must be positive".into()));
    }
    let certificate = spectral_norm(&matrix, DEFAULT_NORM_TOL)?;
    if certificate > 1.0 + nonexp_tol {
        return Err(Error::ExpansiveOperator(certificate));
    }
    let fix_basis = null_space_basis(&matrix.identity_minus()?, rank_tol)?;
    Ok(LinearOperator {
        matrix,
        fix_basis,
        certificate,
    })
}

/// `(1 − λ)x + λRx`. Any real `λ` is accepted, including overrelaxation.
pub fn relax_apply(r: &LinearOperator, lambda: f64, x: &Vector) -> Result<Vector> {
    r.relax(lambda, x)
}

/// Orthogonal projection onto `Fix R` via the cached basis.
pub fn project_fix(r: &LinearOperator, x: &Vector) -> Result<Vector> {
    r.fix_basis.project(x)
}

/// `N = (R − (1 − κ)Id)/κ`, re-certified as nonexpansive.
///
/// Fails with [`Error::ExpansiveOperator`] when `κ` is below the modulus of
/// averagedness of `R`.
pub fn averaged_transform(r: &LinearOperator, kappa: f64) -> Result<LinearOperator> {
    if !(kappa > 0.0 && kappa <= 1.0) {
        return Err(Error::Validation(format!("kappa must lie in ]0,1], got {kappa}")));
    }
    let d = r.dim();
    let shifted = r.matrix.sub(&Matrix::identity(d).scale(1.0 - kappa))?;
    LinearOperator::new(shifted.scale(1.0 / kappa))
}

/// `S x = R x + b` with a stored anchor `a` satisfying `(Id − R)a = b`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineOperator {
    linear: LinearOperator,
    offset: Vector,
    anchor: Vector,
}

impl AffineOperator {
    pub fn new(linear: LinearOperator, offset: Vector) -> Result<Self> {
        make_affine(linear, offset, DEFAULT_ANCHOR_TOL)
    }

    pub fn linear_part(&self) -> &LinearOperator {
        &self.linear
    }

    pub fn offset(&self) -> &Vector {
        &self.offset
    }

    pub fn anchor(&self) -> &Vector {
        &self.anchor
    }
}

impl FixedPointOperator for AffineOperator {
    fn dim(&self) -> usize {
        self.linear.dim()
    }

    #[inline]
    fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        self.linear.matrix.mul_slice_into(x, out);
        for (o, b) in out.iter_mut().zip(self.offset.as_slice()) {
            *o += b;
        }
    }

    fn project_fix(&self, x: &Vector) -> Result<Vector> {
        project_fix_affine(self, x)
    }

    fn fixes_only_origin(&self) -> bool {
        self.linear.fixes_only_origin() && self.anchor.norm() == 0.0
    }

    fn project_fix_into(&self, x: &[f64], out: &mut [f64]) {
        // a + Σ q ⟨q, x − a⟩
        let a = self.anchor.as_slice();
        out.copy_from_slice(a);
        for q in self.linear.fix_basis.vectors() {
            let q = q.as_slice();
            let c: f64 = q.iter().zip(x).zip(a).map(|((qi, xi), ai)| qi * (xi - ai)).sum();
            for (o, qi) in out.iter_mut().zip(q) {
                *o += c * qi;
            }
        }
    }
}

/// Builds `S = R(·) + b`. The anchor is the minimum-norm solution of
/// `(Id − R)a = b`; construction fails with [`Error::EmptyFixedSet`] when the
/// residual exceeds `tol·(1 + ‖b‖)`.
pub fn make_affine(r: LinearOperator, b: Vector, tol: f64) -> Result<AffineOperator> {
    check_dim(r.dim(), b.dim())?;
    let m = r.matrix.identity_minus()?;
    let (anchor, residual) = least_squares_min_norm(&m, &b, DEFAULT_RANK_TOL)?;
    if residual > tol * (1.0 + b.norm()) {
        return Err(Error::EmptyFixedSet { residual });
    }
    Ok(AffineOperator {
        linear: r,
        offset: b,
        anchor,
    })
}

/// `Rx + b`.
pub fn affine_apply(s: &AffineOperator, x: &Vector) -> Result<Vector> {
    s.apply(x)
}

/// `(1 − λ)x + λ(Rx + b)`.
pub fn affine_relax_apply(s: &AffineOperator, lambda: f64, x: &Vector) -> Result<Vector> {
    s.relax(lambda, x)
}

/// `a + P_{Fix R}(x − a)`.
pub fn project_fix_affine(s: &AffineOperator, x: &Vector) -> Result<Vector> {
    let shifted = x.sub(&s.anchor)?;
    s.anchor.add(&project_fix(&s.linear, &shifted)?)
}

/// Either kind of operator, as loaded from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "OperatorSpec", try_from = "OperatorSpec")]
pub enum Operator {
    Linear(LinearOperator),
    Affine(AffineOperator),
}

impl Operator {
    pub fn linear_part(&self) -> &LinearOperator {
        match self {
            Operator::Linear(r) => r,
            Operator::Affine(s) => s.linear_part(),
        }
    }
}

impl From<LinearOperator> for Operator {
    fn from(r: LinearOperator) -> Self {
        Operator::Linear(r)
    }
}

impl From<AffineOperator> for Operator {
    fn from(s: AffineOperator) -> Self {
        Operator::Affine(s)
    }
}

impl FixedPointOperator for Operator {
    fn dim(&self) -> usize {
        self.linear_part().dim()
    }

    #[inline]
    fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        match self {
            Operator::Linear(r) => r.apply_into(x, out),
            Operator::Affine(s) => s.apply_into(x, out),
        }
    }

    fn project_fix(&self, x: &Vector) -> Result<Vector> {
        match self {
            Operator::Linear(r) => r.project_fix(x),
            Operator::Affine(s) => s.project_fix(x),
        }
    }

    fn fixes_only_origin(&self) -> bool {
        match self {
            Operator::Linear(r) => r.fixes_only_origin(),
            Operator::Affine(s) => s.fixes_only_origin(),
        }
    }

    fn project_fix_into(&self, x: &[f64], out: &mut [f64]) {
        match self {
            Operator::Linear(r) => r.project_fix_into(x, out),
            Operator::Affine(s) => s.project_fix_into(x, out),
        }
    }
}

/// On-disk operator description:
/// `{"dim": 2, "rows": [[0.7, 0.0], [0.0, 0.2]], "offset": [0.0, 0.0]}`.
/// A missing `offset` means the operator is linear.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorSpec {
    pub dim: usize,
    pub rows: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset: Option<Vec<f64>>,
}

impl OperatorSpec {
    pub fn diagonal(entries: &[f64]) -> Self {
        OperatorSpec {
            dim: entries.len(),
            rows: Matrix::diag(entries).to_rows(),
            offset: None,
        }
    }

    /// Validates the shape and certifies the operator with default tolerances.
    pub fn build(&self) -> Result<Operator> {
        if self.rows.len() != self.dim {
            return Err(Error::Validation(format!(
                "rows: expected {} rows for dim {}, got {}",
                self.dim,
                self.dim,
                self.rows.len()
            )));
        }
        if let Some(i) = self.rows.iter().position(|r| r.len() != self.dim) {
            return Err(Error::Validation(format!(
                "rows[{i}]: expected {} entries, got {}",
                self.dim,
                self.rows[i].len()
            )));
        }
        let r = LinearOperator::new(Matrix::from_rows(&self.rows)?)?;
        match &self.offset {
            None => Ok(Operator::Linear(r)),
            Some(b) => {
                if b.len() != self.dim {
                    return Err(Error::Validation(format!(
                        "offset: expected {} entries, got {}",
                        self.dim,
                        b.len()
                    )));
                }
                Ok(Operator::Affine(AffineOperator::new(r, Vector::new(b.clone())?)?))
            }
        }
    }
}

impl From<Operator> for OperatorSpec {
    fn from(op: Operator) -> Self {
        let r = op.linear_part();
        OperatorSpec {
            dim: r.dim(),
            rows: r.matrix().to_rows(),
            offset: match &op {
                Operator::Linear(_) => None,
                Operator::Affine(s) => Some(s.offset().as_slice().to_vec()),
            },
        }
    }
}

impl TryFrom<OperatorSpec> for Operator {
    type Error = Error;
    fn try_from(spec: OperatorSpec) -> Result<Self> {
        spec.build()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn v(x: &[f64]) -> Vector {
        Vector::new(x.to_vec()).unwrap()
    }

    fn diag(d: &[f64]) -> LinearOperator {
        LinearOperator::new(Matrix::diag(d)).unwrap()
    }

    fn assert_vec(a: &Vector, b: &[f64], tol: f64) {
        assert_eq!(a.dim(), b.len());
        for (x, y) in a.as_slice().iter().zip(b) {
            assert_abs_diff_eq!(*x, *y, epsilon = tol);
        }
    }

    #[test]
    fn make_linear_examples() {
        assert!(diag(&[0.7, 0.2]).fix_basis().is_empty());
        assert_eq!(diag(&[1.0, 1.0]).fix_basis().len(), 2);
        match LinearOperator::new(Matrix::diag(&[1.5, 0.2])) {
            Err(Error::ExpansiveOperator(n)) => assert_abs_diff_eq!(n, 1.5, epsilon = 1e-12),
            other => panic!("unexpected {other:?}"),
        }
        let rect = Matrix::from_rows(&[vec![0.1, 0.2, 0.3]]).unwrap();
        assert!(matches!(LinearOperator::new(rect), Err(Error::NonSquare { .. })));
    }

    #[test]
    fn relax_apply_examples() {
        let r = diag(&[0.7, 0.2]);
        let x = v(&[1.0, 1.0]);
        assert_eq!(relax_apply(&r, 0.0, &x).unwrap(), x);
        assert_eq!(relax_apply(&r, 1.0, &x).unwrap(), v(&[0.7, 0.2]));
        assert_vec(&relax_apply(&r, 0.5, &x).unwrap(), &[0.85, 0.6], 1e-15);
        assert!(relax_apply(&r, 0.5, &v(&[1.0])).is_err());
    }

    #[test]
    fn affine_examples() {
        let s = AffineOperator::new(diag(&[0.5, 0.5]), v(&[1.0, 0.0])).unwrap();
        assert_vec(s.anchor(), &[2.0, 0.0], 1e-12);
        assert_vec(&affine_apply(&s, &v(&[2.0, 0.0])).unwrap(), &[2.0, 0.0], 1e-15);
        assert_eq!(affine_relax_apply(&s, 0.0, &v(&[5.0, 5.0])).unwrap(), v(&[5.0, 5.0]));
        assert_vec(&affine_relax_apply(&s, 0.5, &v(&[0.0, 0.0])).unwrap(), &[0.5, 0.0], 1e-15);
    }

    #[test]
    fn make_affine_examples() {
        assert!(matches!(
            AffineOperator::new(diag(&[1.0, 0.5]), v(&[1.0, 0.0])),
            Err(Error::EmptyFixedSet { .. })
        ));
        let s = AffineOperator::new(diag(&[0.3, -0.4]), Vector::zeros(2)).unwrap();
        assert_eq!(s.anchor().norm(), 0.0);
    }

    #[test]
    fn project_fix_examples() {
        assert_vec(&project_fix(&diag(&[0.7, 0.2]), &v(&[3.0, 4.0])).unwrap(), &[0.0, 0.0], 0.0);
        assert_vec(&project_fix(&diag(&[1.0, 1.0]), &v(&[3.0, 4.0])).unwrap(), &[3.0, 4.0], 1e-12);
        let p = LinearOperator::new(Matrix::from_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap())
            .unwrap();
        assert_vec(&project_fix(&p, &v(&[1.0, 0.0])).unwrap(), &[0.5, 0.5], 1e-12);
    }

    #[test]
    fn project_fix_affine_examples() {
        let s = AffineOperator::new(diag(&[0.5, 0.5]), v(&[1.0, 0.0])).unwrap();
        assert_vec(&project_fix_affine(&s, &v(&[7.0, 7.0])).unwrap(), &[2.0, 0.0], 1e-12);

        let r = diag(&[1.0, 0.5]);
        let s = AffineOperator::new(r.clone(), v(&[0.0, 1.0])).unwrap();
        assert_vec(s.anchor(), &[0.0, 2.0], 1e-12);
        assert_vec(&project_fix_affine(&s, &v(&[3.0, 0.0])).unwrap(), &[3.0, 2.0], 1e-12);

        let s0 = AffineOperator::new(r.clone(), Vector::zeros(2)).unwrap();
        let x = v(&[-1.5, 4.0]);
        assert_eq!(project_fix_affine(&s0, &x).unwrap(), project_fix(&r, &x).unwrap());
    }

    #[test]
    fn averaged_transform_examples() {
        let n = averaged_transform(&LinearOperator::new(Matrix::zeros(2, 2)).unwrap(), 0.5).unwrap();
        assert_eq!(n.matrix(), &Matrix::diag(&[-1.0, -1.0]));

        let n = averaged_transform(&diag(&[0.7, 0.2]), 0.4).unwrap();
        assert_abs_diff_eq!(n.matrix().get(0, 0), 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(n.matrix().get(1, 1), -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(n.spectral_norm(), 1.0, epsilon = 1e-12);

        assert!(matches!(
            averaged_transform(&diag(&[0.7, 0.2]), 0.3),
            Err(Error::ExpansiveOperator(_))
        ));
        assert!(averaged_transform(&diag(&[0.7, 0.2]), 0.0).is_err());
    }

    #[test]
    fn averaged_transform_preserves_fixed_set() {
        let r = diag(&[1.0, 0.2, -0.5]);
        let n = averaged_transform(&r, 0.9).unwrap();
        assert_eq!(n.fix_basis().len(), 1);
        let x = v(&[1.0, 2.0, 3.0]);
        assert_vec(&project_fix(&n, &x).unwrap(), project_fix(&r, &x).unwrap().as_slice(), 1e-12);
    }

    #[test]
    fn operator_spec_json() {
        let op: Operator =
            serde_json::from_str(r#"{"dim": 2, "rows": [[0.7, 0.0], [0.0, 0.2]]}"#).unwrap();
        assert!(matches!(op, Operator::Linear(_)));
        let op: Operator = serde_json::from_str(
            r#"{"dim": 2, "rows": [[0.5, 0.0], [0.0, 0.5]], "offset": [1.0, 0.0]}"#,
        )
        .unwrap();
        assert!(matches!(op, Operator::Affine(_)));
        let back = serde_json::to_string(&op).unwrap();
        assert_eq!(back, r#"{"dim":2,"rows":[[0.5,0.0],[0.0,0.5]],"offset":[1.0,0.0]}"#);

        let bad = OperatorSpec {
            dim: 2,
            rows: vec![vec![0.1, 0.0]],
            offset: None,
        };
        assert!(matches!(bad.build(), Err(Error::Validation(m)) if m.starts_with("rows")));
    }
}
