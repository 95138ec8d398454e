//! Dense real linear algebra at desk scale.
//!
//! [`Vector`] and [`Matrix`] are small value types with finite entries.
//! Singular values, null spaces and minimum-norm least squares come from a
//! one-sided Jacobi SVD, which stays accurate on the rank-deficient
//! symmetric matrices `Id − R` produced here.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};

/// Relative rank threshold used to decide which singular values count as zero.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Orthogonality threshold of the Jacobi sweeps when estimating spectral norms.
pub const DEFAULT_NORM_TOL: f64 = 1e-12;

const SVD_MAX_SWEEPS: usize = 100;

/// An element of ℝ^d with finite entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Validation("vector must have at least one entry".into()));
        }
        if let Some(i) = entries.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Vector(entries))
    }

    pub fn zeros(dim: usize) -> Self {
        Vector(vec![0.0; dim])
    }

    /// Canonical basis vector `e_i` in dimension `dim`.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        Vector(v)
    }

    /// Wraps entries produced by arithmetic on finite inputs.
    pub(crate) fn from_raw(entries: Vec<f64>) -> Self {
        Vector(entries)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn norm_squared(&self) -> f64 {
        dot(&self.0, &self.0)
    }

    pub fn dot(&self, other: &Vector) -> Result<f64> {
        inner(self, other)
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        check_dim(self.dim(), other.dim())?;
        Ok(Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector> {
        check_dim(self.dim(), other.dim())?;
        Ok(Vector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    pub fn scale(&self, s: f64) -> Vector {
        Vector(self.0.iter().map(|a| a * s).collect())
    }

    /// Euclidean distance to `other`.
    pub fn distance(&self, other: &Vector) -> Result<f64> {
        check_dim(self.dim(), other.dim())?;
        Ok(distance(&self.0, &other.0))
    }
}

impl TryFrom<Vec<f64>> for Vector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Vector::new(v)
    }
}

impl From<Vector> for Vec<f64> {
    fn from(v: Vector) -> Self {
        v.0
    }
}

impl std::ops::Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Dense row-major matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Builds a matrix from a list of rows; every row must have the same length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let nrows = rows.len();
        if nrows == 0 {
            return Err(Error::Validation("matrix must have at least one row".into()));
        }
        let ncols = rows[0].len();
        if ncols == 0 {
            return Err(Error::Validation("matrix must have at least one column".into()));
        }
        let mut data = Vec::with_capacity(nrows * ncols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != ncols {
                return Err(Error::Validation(format!(
                    "row {i} has {} entries, expected {ncols}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Matrix::from_row_major(nrows, ncols, data)
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Validation("matrix dimensions must be positive".into()));
        }
        check_dim(rows * cols, data.len())?;
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn identity(dim: usize) -> Self {
        Matrix::diag(&vec![1.0; dim])
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn diag(entries: &[f64]) -> Self {
        let d = entries.len();
        let mut m = Matrix::zeros(d, d);
        for (i, &v) in entries.iter().enumerate() {
            m.data[i * d + i] = v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        check_dim(self.rows, other.rows)?;
        check_dim(self.cols, other.cols)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        check_dim(self.cols, other.rows)?;
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    /// `Id − self` for a square matrix.
    pub fn identity_minus(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Matrix::identity(self.rows).sub(self)
    }

    pub fn mul_vec(&self, x: &Vector) -> Result<Vector> {
        check_dim(self.cols, x.dim())?;
        let mut out = vec![0.0; self.rows];
        self.mul_slice_into(x.as_slice(), &mut out);
        Ok(Vector::from_raw(out))
    }

    /// `out = self · x` on raw slices; lengths are the caller's responsibility.
    #[inline]
    pub fn mul_slice_into(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.cols);
        debug_assert_eq!(out.len(), self.rows);
        for (o, row) in out.iter_mut().zip(self.data.chunks_exact(self.cols)) {
            *o = dot(row, x);
        }
    }
}

/// Orthonormal basis of a subspace of ℝ^d; possibly empty.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthonormalBasis {
    vectors: Vec<Vector>,
    ambient_dim: usize,
}

impl OrthonormalBasis {
    pub fn empty(ambient_dim: usize) -> Self {
        OrthonormalBasis {
            vectors: Vec::new(),
            ambient_dim,
        }
    }

    /// Caller guarantees orthonormality; checked in debug builds.
    pub(crate) fn from_orthonormal(vectors: Vec<Vector>, ambient_dim: usize) -> Self {
        let basis = OrthonormalBasis {
            vectors,
            ambient_dim,
        };
        debug_assert!(basis.orthonormality_defect() <= 1e-10);
        basis
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Dimension of the spanned subspace.
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, u) in self.vectors.iter().enumerate() {
            for (j, v) in self.vectors.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot(u.as_slice(), v.as_slice()) - target).abs());
            }
        }
        worst
    }

    /// Orthogonal projection onto the span.
    pub fn project(&self, x: &Vector) -> Result<Vector> {
        check_dim(self.ambient_dim, x.dim())?;
        let mut out = vec![0.0; self.ambient_dim];
        self.project_slice_into(x.as_slice(), &mut out);
        Ok(Vector::from_raw(out))
    }

    pub(crate) fn project_slice_into(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for v in &self.vectors {
            let c = dot(x, v.as_slice());
            for (o, vi) in out.iter_mut().zip(v.as_slice()) {
                *o += c * vi;
            }
        }
    }

    /// Linear combination `Σ coeffs[i] · v_i`.
    pub fn combine(&self, coeffs: &[f64]) -> Result<Vector> {
        check_dim(self.vectors.len(), coeffs.len())?;
        let mut out = vec![0.0; self.ambient_dim];
        for (c, v) in coeffs.iter().zip(&self.vectors) {
            for (o, vi) in out.iter_mut().zip(v.as_slice()) {
                *o += c * vi;
            }
        }
        Ok(Vector::from_raw(out))
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Euclidean inner product.
pub fn inner(u: &Vector, v: &Vector) -> Result<f64> {
    check_dim(u.dim(), v.dim())?;
    Ok(dot(u.as_slice(), v.as_slice()))
}

/// Right singular vectors `v_j`, the images `m·v_j` and `σ_j = ‖m·v_j‖`.
struct Svd {
    sigma: Vec<f64>,
    v: Vec<Vec<f64>>,
    images: Vec<Vec<f64>>,
}

/// One-sided (Hestenes) Jacobi: rotate column pairs of `m·V` until every
/// pair satisfies `|⟨a_p, a_q⟩| ≤ tol·‖a_p‖‖a_q‖`.
fn svd(m: &Matrix, tol: f64) -> Result<Svd> {
    let (rows, n) = (m.rows(), m.cols());
    let tol = tol.max(f64::EPSILON * n.max(rows) as f64);
    let mut a: Vec<Vec<f64>> = (0..n).map(|j| (0..rows).map(|i| m.get(i, j)).collect()).collect();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    // Columns at roundoff level relative to the whole matrix are treated as
    // zero; their direction is noise and would never pass the relative test.
    let frob2: f64 = a.iter().map(|col| dot(col, col)).sum();
    let negligible = (f64::EPSILON * f64::EPSILON) * frob2;

    let mut converged = false;
    for _ in 0..SVD_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = dot(&a[p], &a[p]);
                let beta = dot(&a[q], &a[q]);
                let gamma = dot(&a[p], &a[q]);
                if alpha <= negligible
                    || beta <= negligible
                    || gamma.abs() <= tol * (alpha * beta).sqrt()
                {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut a, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numeric(format!(
            "SVD did not converge within {SVD_MAX_SWEEPS} sweeps"
        )));
    }
    Ok(Svd {
        sigma: a.iter().map(|col| norm(col)).collect(),
        v,
        images: a,
    })
}

fn rotate(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (left, right) = cols.split_at_mut(q);
    for (xp, xq) in left[p].iter_mut().zip(right[0].iter_mut()) {
        let (u, w) = (*xp, *xq);
        *xp = c * u - s * w;
        *xq = s * u + c * w;
    }
}

/// Largest singular value of `m`.
///
/// `tol` bounds the relative orthogonality defect at which the Jacobi sweeps
/// stop; exceeding the sweep budget is reported as [`Error::Numeric`].
pub fn spectral_norm(m: &Matrix, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Validation(format!("tol must be positive, got {tol}")));
    }
    let s = svd(m, tol.min(DEFAULT_NORM_TOL))?;
    Ok(s.sigma.iter().cloned().fold(0.0, f64::max))
}

/// Splits the right singular vectors of a square `m` into those whose
/// singular value is at most `rank_tol·(1 + ‖m‖)` (kernel) and the rest
/// (co-kernel), returning `(kernel, cokernel)` with their singular values.
pub(crate) fn split_right_singular(
    m: &Matrix,
    rank_tol: f64,
) -> Result<(Vec<Vector>, Vec<(Vector, f64)>)> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let s = svd(m, f64::EPSILON)?;
    let sigma_max = s.sigma.iter().cloned().fold(0.0, f64::max);
    let threshold = rank_tol * (1.0 + sigma_max);
    let mut kernel = Vec::new();
    let mut cokernel = Vec::new();
    for (v, sigma) in s.v.into_iter().zip(s.sigma) {
        let v = Vector::from_raw(v);
        if sigma <= threshold {
            kernel.push(v);
        } else {
            cokernel.push((v, sigma));
        }
    }
    Ok((kernel, cokernel))
}

/// Orthonormal basis of the numerical kernel of a square matrix:
/// the span of right singular vectors with `σ ≤ rank_tol·(1 + ‖m‖)`.
pub fn null_space_basis(m: &Matrix, rank_tol: f64) -> Result<OrthonormalBasis> {
    if !(rank_tol > 0.0) {
        return Err(Error::Validation(format!("rank_tol must be positive, got {rank_tol}")));
    }
    let (kernel, _) = split_right_singular(m, rank_tol)?;
    Ok(OrthonormalBasis::from_orthonormal(kernel, m.cols()))
}

/// Minimum-norm least-squares solution of `m·x ≈ b` together with the
/// residual norm `‖m·x − b‖`. Singular values below `rank_tol·(1 + ‖m‖)`
/// are treated as zero.
pub fn least_squares_min_norm(m: &Matrix, b: &Vector, rank_tol: f64) -> Result<(Vector, f64)> {
    check_dim(m.rows(), b.dim())?;
    if !(rank_tol > 0.0) {
        return Err(Error::Validation(format!("rank_tol must be positive, got {rank_tol}")));
    }
    let s = svd(m, f64::EPSILON)?;
    let sigma_max = s.sigma.iter().cloned().fold(0.0, f64::max);
    let threshold = rank_tol * (1.0 + sigma_max);
    // x = Σ v_j ⟨m·v_j, b⟩ / σ_j² over the retained singular values.
    let mut x = vec![0.0; m.cols()];
    for ((v, image), &sigma) in s.v.iter().zip(&s.images).zip(&s.sigma) {
        if sigma > threshold {
            let c = dot(image, b.as_slice()) / (sigma * sigma);
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi += c * vi;
            }
        }
    }
    let mut mx = vec![0.0; m.rows()];
    m.mul_slice_into(&x, &mut mx);
    let residual = distance(&mx, b.as_slice());
    Ok((Vector::from_raw(x), residual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn v(x: &[f64]) -> Vector {
        Vector::new(x.to_vec()).unwrap()
    }

    #[test]
    fn inner_examples() {
        assert_eq!(inner(&v(&[1.0, 0.0]), &v(&[0.0, 1.0])).unwrap(), 0.0);
        assert_eq!(inner(&v(&[1.0, 1.0]), &v(&[1.0, 1.0])).unwrap(), 2.0);
        assert_eq!(inner(&v(&[1.0, 2.0]), &v(&[3.0, 4.0])).unwrap(), 11.0);
    }

    #[test]
    fn inner_dimension_mismatch() {
        let err = inner(&v(&[1.0]), &v(&[1.0, 2.0])).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 1, found: 2 });
    }

    #[test]
    fn vector_rejects_non_finite_and_empty() {
        assert_eq!(Vector::new(vec![1.0, f64::NAN]).unwrap_err(), Error::NonFinite(1));
        assert!(Vector::new(vec![]).is_err());
        assert!(Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0]]).is_err());
        assert_eq!(
            Matrix::from_rows(&[vec![f64::INFINITY]]).unwrap_err(),
            Error::NonFinite(0)
        );
    }

    #[test]
    fn spectral_norm_examples() {
        assert_abs_diff_eq!(spectral_norm(&Matrix::identity(2), 1e-12).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            spectral_norm(&Matrix::diag(&[0.7, 0.2]), 1e-12).unwrap(),
            0.7,
            epsilon = 1e-12
        );
        let rot = Matrix::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap();
        assert_abs_diff_eq!(spectral_norm(&rot, 1e-12).unwrap(), 1.0, epsilon = 1e-12);
        assert!(spectral_norm(&rot, 0.0).is_err());
    }

    #[test]
    fn null_space_examples() {
        let b = null_space_basis(&Matrix::diag(&[0.0, 0.5]), DEFAULT_RANK_TOL).unwrap();
        assert_eq!(b.len(), 1);
        assert_abs_diff_eq!(b.vectors()[0][0].abs(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b.vectors()[0][1], 0.0, epsilon = 1e-12);

        let m = Matrix::identity(2).sub(&Matrix::diag(&[0.7, 0.2])).unwrap();
        assert!(null_space_basis(&m, DEFAULT_RANK_TOL).unwrap().is_empty());

        let p = Matrix::from_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        let b = null_space_basis(&p.identity_minus().unwrap(), DEFAULT_RANK_TOL).unwrap();
        assert_eq!(b.len(), 1);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = &b.vectors()[0];
        assert_abs_diff_eq!(u[0].abs(), s, epsilon = 1e-12);
        assert_abs_diff_eq!(u[0], u[1], epsilon = 1e-12);
    }

    #[test]
    fn null_space_of_zero_matrix_is_everything() {
        let b = null_space_basis(&Matrix::zeros(3, 3), DEFAULT_RANK_TOL).unwrap();
        assert_eq!(b.len(), 3);
        assert!(b.orthonormality_defect() < 1e-12);
    }

    #[test]
    fn least_squares_examples() {
        let (x, r) =
            least_squares_min_norm(&Matrix::diag(&[0.5, 0.5]), &v(&[1.0, 0.0]), DEFAULT_RANK_TOL)
                .unwrap();
        assert_abs_diff_eq!(x[0], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(x[1], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r, 0.0, epsilon = 1e-12);

        let (_, r) =
            least_squares_min_norm(&Matrix::diag(&[0.0, 0.5]), &v(&[1.0, 0.0]), DEFAULT_RANK_TOL)
                .unwrap();
        assert_abs_diff_eq!(r, 1.0, epsilon = 1e-12);

        let (x, r) =
            least_squares_min_norm(&Matrix::diag(&[0.0, 0.5]), &v(&[0.0, 1.0]), DEFAULT_RANK_TOL)
                .unwrap();
        assert_abs_diff_eq!(x[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(x[1], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn projection_onto_basis() {
        let p = Matrix::from_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        let b = null_space_basis(&p.identity_minus().unwrap(), DEFAULT_RANK_TOL).unwrap();
        let y = b.project(&v(&[1.0, 0.0])).unwrap();
        assert_abs_diff_eq!(y[0], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(y[1], 0.5, epsilon = 1e-12);
    }

    fn reconstruction_error(m: &Matrix) -> f64 {
        let s = svd(m, f64::EPSILON).unwrap();
        // m·v_j = images_j, so m = Σ images_j v_jᵀ when V is orthogonal.
        let mut worst: f64 = 0.0;
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let r: f64 = s.images.iter().zip(&s.v).map(|(a, v)| a[i] * v[j]).sum();
                worst = worst.max((r - m.get(i, j)).abs());
            }
        }
        worst
    }

    #[test]
    fn rank_one_symmetric_factorization() {
        // I − R for R symmetric with eigenvalues 1 and −0.5127.
        let m = Matrix::from_rows(&[
            vec![1.0 - 0.2346766679069488, -0.7562884381435545],
            vec![-0.7562884381435545, 1.0 - 0.2526397959077591],
        ])
        .unwrap();
        assert!(reconstruction_error(&m) < 1e-14);
        let (kernel, cokernel) = split_right_singular(&m, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(kernel.len(), 1);
        assert_abs_diff_eq!(cokernel[0].1, 1.5126835361852924, epsilon = 1e-12);
    }

    #[test]
    fn wide_and_tall_factorizations() {
        let wide = Matrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.5]]).unwrap();
        assert!(reconstruction_error(&wide) < 1e-13);
        assert!(reconstruction_error(&wide.transpose()) < 1e-13);
        assert_eq!(reconstruction_error(&Matrix::zeros(3, 3)), 0.0);
    }
}
