//! Small dense kernels: symmetric Jacobi eigensolver, singular values,
//! distance from a vector to a span, and numerical rank.
//!
//! Everything here is sized for matrices with at most [`MAX_SMALL_SIDE`]
//! rows or columns on the short side.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::Inequality;

/// Largest short side accepted by the eigen and singular value routines.
pub const MAX_SMALL_SIDE: usize = 64;

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_OFF_TOL: f64 = 1e-12;
const PSEUDO_SOLVE_CUTOFF: f64 = 1e-12;
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Row-major dense matrix with finite entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::Contract("matrix entries must be finite".into()));
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                got: bad.len(),
            });
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn from_columns(cols: &[Vec<f64>]) -> Result<Self> {
        Ok(Self::from_rows(cols)?.transpose())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column_vectors(&self) -> Vec<Vec<f64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// `max_ij |A_ij − B_ij|`.
    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// Eigen-decomposition of a symmetric matrix, eigenvalues descending and
/// eigenvectors stored as the matching columns of `vectors`.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: DenseMatrix,
}

/// Cyclic Jacobi eigensolver, row-cyclic sweep order.
pub fn jacobi_eigh(s: &DenseMatrix) -> Result<SymmetricEigen> {
    let n = s.rows();
    if s.cols() != n {
        return Err(Error::Contract("jacobi_eigh needs a square matrix".into()));
    }
    if n > MAX_SMALL_SIDE {
        return Err(Error::Guardrail(format!(
            "matrix of order {n} exceeds {MAX_SMALL_SIDE}"
        )));
    }
    let scale = s.frobenius_norm();
    for i in 0..n {
        for j in 0..i {
            if (s.get(i, j) - s.get(j, i)).abs() > 1e-12 * scale {
                return Err(Error::Contract(format!(
                    "matrix is not symmetric at ({i}, {j})"
                )));
            }
        }
    }

    let mut a = s.clone();
    let mut q = DenseMatrix::identity(n);
    let off = |a: &DenseMatrix| -> f64 {
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    acc += a.get(i, j) * a.get(i, j);
                }
            }
        }
        acc.sqrt()
    };

    let mut sweeps = 0;
    loop {
        let off_norm = off(&a);
        if off_norm <= JACOBI_OFF_TOL * scale {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off_norm });
        }
        sweeps += 1;
        for p in 0..n {
            for r in (p + 1)..n {
                let apr = a.get(p, r);
                if apr == 0.0 {
                    continue;
                }
                let theta = (a.get(r, r) - a.get(p, p)) / (2.0 * apr);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                // A ← JᵀAJ with J the (p, r) rotation
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akr = a.get(k, r);
                    a.set(k, p, c * akp - sn * akr);
                    a.set(k, r, sn * akp + c * akr);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let ark = a.get(r, k);
                    a.set(p, k, c * apk - sn * ark);
                    a.set(r, k, sn * apk + c * ark);
                }
                a.set(p, r, 0.0);
                a.set(r, p, 0.0);
                for k in 0..n {
                    let qkp = q.get(k, p);
                    let qkr = q.get(k, r);
                    q.set(k, p, c * qkp - sn * qkr);
                    q.set(k, r, sn * qkp + c * qkr);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a.get(y, y).total_cmp(&a.get(x, x)));
    let values = order.iter().map(|&i| a.get(i, i)).collect();
    let mut vectors = DenseMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for k in 0..n {
            vectors.set(k, dst, q.get(k, src));
        }
    }
    Ok(SymmetricEigen { values, vectors })
}

/// Singular values, descending, `min(rows, cols)` of them.
///
/// One-sided (Hestenes) Jacobi on the shorter side: the `min(rows, cols)`
/// rows or columns are rotated pairwise until mutually orthogonal, and the
/// singular values are their final norms. Unlike square roots of Gram
/// eigenvalues this keeps small singular values accurate relative to
/// themselves.
pub fn singular_values(m: &DenseMatrix) -> Result<Vec<f64>> {
    let mut vecs = if m.rows() <= m.cols() {
        m.row_vectors()
    } else {
        m.column_vectors()
    };
    let count = vecs.len();
    if count > MAX_SMALL_SIDE {
        return Err(Error::Guardrail(format!(
            "short side {count} exceeds {MAX_SMALL_SIDE}"
        )));
    }
    let len = vecs.first().map_or(0, Vec::len);
    let tol = (len.max(1) as f64).sqrt() * f64::EPSILON;

    let mut sweeps = 0;
    loop {
        let mut rotated = false;
        let mut worst: f64 = 0.0;
        for p in 0..count {
            for r in (p + 1)..count {
                let alpha = dot(&vecs[p], &vecs[p]);
                let beta = dot(&vecs[r], &vecs[r]);
                let gamma = dot(&vecs[p], &vecs[r]);
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let cosine = gamma.abs() / (alpha.sqrt() * beta.sqrt());
                worst = worst.max(cosine);
                if cosine <= tol {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sn = c * t;
                let (lo, hi) = vecs.split_at_mut(r);
                for (x, y) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
                    let (xp, yr) = (*x, *y);
                    *x = c * xp - sn * yr;
                    *y = sn * xp + c * yr;
                }
            }
        }
        if !rotated {
            break;
        }
        sweeps += 1;
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: worst,
            });
        }
    }
    let mut sigma: Vec<f64> = vecs.iter().map(|v| norm2(v)).collect();
    sigma.sort_by(|a, b| b.total_cmp(a));
    Ok(sigma)
}

/// Spectral norm `σ_1`.
pub fn operator_norm(m: &DenseMatrix) -> Result<f64> {
    Ok(singular_values(m)?.first().copied().unwrap_or(0.0))
}

/// Euclidean distance from `x` to `span(basis)`.
///
/// The Gram system `G c = Bᵀx` is pseudo-solved through its eigen
/// decomposition (eigenvalues below `1e-12·λ_max` are dropped), then refined
/// with residuals accumulated in compensated arithmetic.
pub fn distance_to_span(x: &[f64], basis: &[Vec<f64>]) -> Result<f64> {
    if let Some(b) = basis.iter().find(|b| b.len() != x.len()) {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: b.len(),
        });
    }
    if basis.is_empty() {
        return Ok(norm2(x));
    }
    let m = basis.len();
    if m > MAX_SMALL_SIDE {
        return Err(Error::Guardrail(format!(
            "span of {m} vectors exceeds {MAX_SMALL_SIDE}"
        )));
    }
    let mut gram = DenseMatrix::zeros(m, m);
    for a in 0..m {
        for b in 0..=a {
            let g = dot(&basis[a], &basis[b]);
            gram.set(a, b, g);
            gram.set(b, a, g);
        }
    }
    let eig = jacobi_eigh(&gram)?;
    let lambda_max = eig.values.first().copied().unwrap_or(0.0);
    if lambda_max <= 0.0 {
        return Ok(norm2(x));
    }
    let cutoff = PSEUDO_SOLVE_CUTOFF * lambda_max;
    let pseudo_solve = |rhs: &[f64]| -> Vec<f64> {
        let mut sol = vec![0.0; m];
        for (k, &lambda) in eig.values.iter().enumerate() {
            if lambda <= cutoff {
                continue;
            }
            let proj: f64 = (0..m).map(|i| eig.vectors.get(i, k) * rhs[i]).sum::<f64>() / lambda;
            for (i, s) in sol.iter_mut().enumerate() {
                *s += proj * eig.vectors.get(i, k);
            }
        }
        sol
    };

    let rhs: Vec<f64> = basis.iter().map(|b| dot(b, x)).collect();
    let mut coeffs = pseudo_solve(&rhs);
    let mut residual = compensated_residual(x, basis, &coeffs);
    for _ in 0..4 {
        let corr_rhs: Vec<f64> = basis.iter().map(|b| dot(b, &residual)).collect();
        let delta = pseudo_solve(&corr_rhs);
        let size = norm2(&delta);
        for (c, d) in coeffs.iter_mut().zip(&delta) {
            *c += d;
        }
        residual = compensated_residual(x, basis, &coeffs);
        if size <= f64::EPSILON * norm2(&coeffs) {
            break;
        }
    }
    Ok(norm2(&residual))
}

/// `x − Σ_k c_k b_k`, each entry accumulated with error-free transformations.
fn compensated_residual(x: &[f64], basis: &[Vec<f64>], coeffs: &[f64]) -> Vec<f64> {
    (0..x.len())
        .map(|i| {
            let mut sum = x[i];
            let mut err = 0.0;
            for (b, &c) in basis.iter().zip(coeffs) {
                let (p, pe) = two_prod(-c, b[i]);
                let (s, se) = two_sum(sum, p);
                sum = s;
                err += pe + se;
            }
            sum + err
        })
        .collect()
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Number of singular values above `tol_rel · σ_1`.
pub fn rank_estimate(m: &DenseMatrix, tol_rel: f64) -> Result<usize> {
    let sigma = singular_values(m)?;
    let top = sigma.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return Ok(0);
    }
    Ok(sigma.iter().filter(|&&x| x > tol_rel * top).count())
}

/// Lower bound on `σ_min(M)` from column-to-span distances, checked against
/// the computed smallest singular value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColumnDistanceBound {
    pub bound: f64,
    pub sigma_min: f64,
    pub check: Inequality,
}

/// `σ_min(M) >= min_j dist(C_j, span{C_i : i ≠ j}) / √m` for `M` with `m`
/// columns.
pub fn sigma_min_from_column_distances(m: &DenseMatrix) -> Result<ColumnDistanceBound> {
    let cols = m.column_vectors();
    let count = cols.len();
    let mut min_dist = f64::INFINITY;
    for j in 0..count {
        let others: Vec<Vec<f64>> = cols
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .map(|(_, c)| c.clone())
            .collect();
        min_dist = min_dist.min(distance_to_span(&cols[j], &others)?);
    }
    let bound = if count == 0 {
        0.0
    } else {
        min_dist / (count as f64).sqrt()
    };
    // more columns than rows: the infimum of |Mx| over unit x is zero
    let sigma_min = if m.cols() > m.rows() {
        0.0
    } else {
        singular_values(m)?.last().copied().unwrap_or(0.0)
    };
    Ok(ColumnDistanceBound {
        bound,
        sigma_min,
        check: Inequality::with_absolute_slack(bound, sigma_min, 1e-9),
    })
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    let scale = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    scale
        * a.iter()
            .map(|x| (x / scale) * (x / scale))
            .sum::<f64>()
            .sqrt()
}
