//! Univariate interpolation in the monomial basis.
//!
//! Divided differences, conversion of the Newton form to monomial
//! coefficients, Lagrange basis coefficients through elementary symmetric
//! sums, and a checker for the coefficient bounds
//! `|c_k| <= |y|_∞ (s − k)(4/κ)^{s−1}` and
//! `Σ|c_k| <= s(s+1)/2 · |y|_∞ (4/κ)^{s−1}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::NORM_TOLERANCE;
use crate::report::Inequality;

/// Distinct nodes in `[−1, 1]` together with their minimal pairwise gap.
#[derive(Debug, Clone, PartialEq)]
pub struct UnivariateNodes {
    t: Vec<f64>,
    min_gap: f64,
}

impl UnivariateNodes {
    pub fn new(t: Vec<f64>) -> Result<Self> {
        if t.is_empty() {
            return Err(Error::InvalidNodeSet("no nodes".into()));
        }
        if let Some(i) = t
            .iter()
            .position(|x| x.is_nan() || x.abs() > 1.0 + NORM_TOLERANCE)
        {
            return Err(Error::InvalidNodeSet(format!(
                "node {i} = {} lies outside [-1, 1]",
                t[i]
            )));
        }
        let mut min_gap = f64::INFINITY;
        for i in 0..t.len() {
            for k in 0..i {
                let gap = (t[i] - t[k]).abs();
                if gap == 0.0 {
                    return Err(Error::InvalidNodeSet(format!("nodes {k} and {i} coincide")));
                }
                min_gap = min_gap.min(gap);
            }
        }
        Ok(UnivariateNodes { t, min_gap })
    }

    pub fn values(&self) -> &[f64] {
        &self.t
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Minimal pairwise gap; infinite for a single node.
    pub fn min_gap(&self) -> f64 {
        self.min_gap
    }
}

/// Coefficients in the monomial basis, lowest degree first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffVector(Vec<f64>);

impl CoeffVector {
    pub fn new(coeffs: Vec<f64>) -> Self {
        CoeffVector(coeffs)
    }

    pub fn zeros(len: usize) -> Self {
        CoeffVector(vec![0.0; len])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `max_k |c_k|`.
    pub fn max_norm(&self) -> f64 {
        self.0.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn l1_norm(&self) -> f64 {
        self.0.iter().map(|c| c.abs()).sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Horner evaluation of a univariate coefficient vector.
    pub fn eval_univariate(&self, t: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }
}

/// Leading entries `Δ_0, ..., Δ_{s−1}` of the divided-difference table.
pub fn divided_differences(nodes: &UnivariateNodes, y: &[f64]) -> Result<Vec<f64>> {
    let t = nodes.values();
    if y.len() != t.len() {
        return Err(Error::DimensionMismatch {
            expected: t.len(),
            got: y.len(),
        });
    }
    let mut table = y.to_vec();
    for order in 1..t.len() {
        for i in (order..t.len()).rev() {
            table[i] = (table[i] - table[i - 1]) / (t[i] - t[i - order]);
        }
    }
    Ok(table)
}

/// Expands `Σ_j Δ_j Π_{i<j} (t − t_i)` into monomial coefficients.
pub fn newton_to_monomial(nodes: &UnivariateNodes, deltas: &[f64]) -> Result<CoeffVector> {
    let t = nodes.values();
    if deltas.len() != t.len() {
        return Err(Error::DimensionMismatch {
            expected: t.len(),
            got: deltas.len(),
        });
    }
    let s = t.len();
    let mut c = vec![0.0; s];
    c[0] = deltas[s - 1];
    let mut deg = 0;
    // nested multiplication: c ← c·(t − t_j) + Δ_j
    for j in (0..s - 1).rev() {
        deg += 1;
        for k in (1..=deg).rev() {
            c[k] = c[k - 1] - t[j] * c[k];
        }
        c[0] = deltas[j] - t[j] * c[0];
    }
    Ok(CoeffVector(c))
}

/// Elementary symmetric sums `e_0, ..., e_m` of `values`.
pub fn elementary_symmetric(values: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; values.len() + 1];
    e[0] = 1.0;
    for (m, &x) in values.iter().enumerate() {
        for k in (1..=m + 1).rev() {
            e[k] += x * e[k - 1];
        }
    }
    e
}

/// Coefficients of `p_j(t) = Π_{i≠j} (t − t_i)/(t_j − t_i)`.
pub fn lagrange_basis_coeffs(nodes: &UnivariateNodes, j: usize) -> Result<CoeffVector> {
    lagrange_product_coeffs(nodes.values(), j)
}

/// Same product, requiring only `t_i ≠ t_j` for `i ≠ j`; the other values
/// may repeat, as happens for projected nodes.
pub fn lagrange_product_coeffs(t: &[f64], j: usize) -> Result<CoeffVector> {
    if j >= t.len() {
        return Err(Error::IndexOutOfRange {
            index: j,
            count: t.len(),
        });
    }
    if let Some(i) = (0..t.len()).find(|&i| i != j && t[i] == t[j]) {
        return Err(Error::InvalidNodeSet(format!("t_{i} equals t_{j}")));
    }
    let others: Vec<f64> = t
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != j)
        .map(|(_, &x)| x)
        .collect();
    let e = elementary_symmetric(&others);
    let denom: f64 = others.iter().map(|&x| t[j] - x).product();
    let m = others.len();
    let coeffs = (0..=m)
        .map(|k| {
            let a = e[m - k];
            let signed = if (m - k).is_multiple_of(2) { a } else { -a };
            signed / denom
        })
        .collect();
    Ok(CoeffVector(coeffs))
}

/// Both sides of every coefficient inequality for one univariate data set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnivariateBoundCertificate {
    pub coeffs: CoeffVector,
    pub divided_differences: Vec<f64>,
    pub min_gap: f64,
    pub y_max: f64,
    pub per_coefficient: Vec<Inequality>,
    pub sum: Inequality,
    pub per_divided_difference: Vec<Inequality>,
    /// First `k` whose coefficient bound fails.
    pub first_violation: Option<usize>,
    pub passed: bool,
}

/// Interpolates `y` and checks the coefficient and divided-difference bounds.
pub fn check_lemma_univariate(
    nodes: &UnivariateNodes,
    y: &[f64],
) -> Result<UnivariateBoundCertificate> {
    let s = nodes.len();
    if s < 2 {
        return Err(Error::Contract("need at least two nodes".into()));
    }
    let gap = nodes.min_gap();
    if gap > 2.0 * (1.0 + NORM_TOLERANCE) {
        return Err(Error::Contract(format!("minimal gap {gap} exceeds 2")));
    }
    let deltas = divided_differences(nodes, y)?;
    let coeffs = newton_to_monomial(nodes, &deltas)?;
    let y_max = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let growth = (4.0 / gap).powi(s as i32 - 1);

    let per_coefficient: Vec<Inequality> = coeffs
        .as_slice()
        .iter()
        .enumerate()
        .map(|(k, c)| Inequality::upper(c.abs(), y_max * (s - k) as f64 * growth))
        .collect();
    let sum = Inequality::upper(
        coeffs.l1_norm(),
        (s * (s + 1)) as f64 / 2.0 * y_max * growth,
    );
    let per_divided_difference = deltas
        .iter()
        .enumerate()
        .map(|(j, d)| Inequality::upper(d.abs(), (2.0 / gap).powi(j as i32) * y_max))
        .collect::<Vec<_>>();
    let first_violation = per_coefficient.iter().position(|q| !q.holds);
    let passed =
        first_violation.is_none() && sum.holds && per_divided_difference.iter().all(|q| q.holds);
    Ok(UnivariateBoundCertificate {
        coeffs,
        divided_differences: deltas,
        min_gap: gap,
        y_max,
        per_coefficient,
        sum,
        per_divided_difference,
        first_violation,
        passed,
    })
}
