//! The monomial Vandermonde matrix `V_N(Z)`, its explicit right inverse, and
//! the certificates comparing every stability bound with the computed
//! quantity it controls.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{kappa_lower_bound, DirectionCertificate, NodeSet, SearchConfig};
use crate::linalg::{
    distance_to_span, norm2, rank_estimate, singular_values, DenseMatrix, DEFAULT_RANK_TOL,
};
use crate::multiindex::{dimension, MonomialOrder};
use crate::multivariate::{
    check_coefficient_bounds, coefficient_bound, kronecker_defect, lagrange_polynomial,
    sharp_coefficient_bound, MultivariatePolynomial,
};
use crate::report::Inequality;

/// Tolerance on `|V V⁺ − I|_max` and on the Kronecker property of `Q_j`.
pub const IDENTITY_TOLERANCE: f64 = 1e-8;

/// Absolute slack on `σ_min(V) >= 1/|B|` for a right inverse `B`.
pub const RIGHT_INVERSE_SLACK: f64 = 1e-9;

/// Nodes, degree, basis order and the `s × ν` matrix with
/// `V[i][k] = z_i^{α_k}`.
#[derive(Debug, Clone)]
pub struct VandermondeSystem {
    nodes: NodeSet,
    order: Arc<MonomialOrder>,
    matrix: DenseMatrix,
}

impl VandermondeSystem {
    pub fn nodes(&self) -> &NodeSet {
        &self.nodes
    }

    pub fn order(&self) -> &Arc<MonomialOrder> {
        &self.order
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn degree(&self) -> usize {
        self.order.degree()
    }

    /// `ν(n, N)`.
    pub fn nu(&self) -> usize {
        self.order.len()
    }

    /// Number of nodes `s`.
    pub fn s(&self) -> usize {
        self.nodes.len()
    }

    pub fn n(&self) -> usize {
        self.nodes.dim()
    }

    fn require_high_degree(&self) -> Result<()> {
        let required = self.s() - 1;
        if self.degree() < required {
            return Err(Error::DegreeTooLow {
                degree: self.degree(),
                required,
            });
        }
        Ok(())
    }

    fn other_rows(&self, j: usize) -> Vec<Vec<f64>> {
        (0..self.s())
            .filter(|&i| i != j)
            .map(|i| self.matrix.row(i).to_vec())
            .collect()
    }
}

/// Builds `V_N(Z)` row by row from per-coordinate power tables.
pub fn build(nodes: &NodeSet, degree: usize) -> Result<VandermondeSystem> {
    let order = Arc::new(MonomialOrder::new(nodes.dim(), degree)?);
    let rows: Vec<Vec<f64>> = nodes
        .points()
        .iter()
        .map(|z| order.monomials_at(z))
        .collect();
    let matrix = DenseMatrix::from_rows(&rows)?;
    Ok(VandermondeSystem {
        nodes: nodes.clone(),
        order,
        matrix,
    })
}

/// The `Q_j` for every node, built from the supplied certificates.
pub fn lagrange_polynomials(
    sys: &VandermondeSystem,
    certs: &[DirectionCertificate],
) -> Result<Vec<MultivariatePolynomial>> {
    sys.require_high_degree()?;
    if certs.len() != sys.s() {
        return Err(Error::DimensionMismatch {
            expected: sys.s(),
            got: certs.len(),
        });
    }
    certs
        .iter()
        .enumerate()
        .map(|(j, c)| lagrange_polynomial(&sys.nodes, j, c, &sys.order))
        .collect()
}

/// `ν × s` right inverse whose `j`-th column is the coefficient vector of
/// `Q_j`.
pub fn right_inverse(
    sys: &VandermondeSystem,
    certs: &[DirectionCertificate],
) -> Result<DenseMatrix> {
    let cols: Vec<Vec<f64>> = lagrange_polynomials(sys, certs)?
        .into_iter()
        .map(|q| q.coeffs().as_slice().to_vec())
        .collect();
    DenseMatrix::from_columns(&cols)
}

/// `δ^{s−1} / ((4n)^{s−1} s √ν)`.
pub fn distance_bound(n: usize, s: usize, nu: usize, delta: f64) -> f64 {
    (delta / (4.0 * n as f64)).powi(s as i32 - 1) / (s as f64 * (nu as f64).sqrt())
}

/// `κ^{s−1} / ((4n)^{s−1} s √(sν))`.
pub fn sigma_min_bound(n: usize, s: usize, nu: usize, kappa: f64) -> f64 {
    (kappa / (4.0 * n as f64)).powi(s as i32 - 1) / (s as f64 * ((s * nu) as f64).sqrt())
}

/// `√(sν)`.
pub fn sigma_max_bound(s: usize, nu: usize) -> f64 {
    ((s * nu) as f64).sqrt()
}

/// `s^{3/2} √ν (4n/κ)^{s−1}`.
pub fn right_inverse_norm_bound(n: usize, s: usize, nu: usize, kappa: f64) -> f64 {
    (s as f64).powf(1.5) * (nu as f64).sqrt() * (4.0 * n as f64 / kappa).powi(s as i32 - 1)
}

/// `s² ν (4n/κ)^{s−1}`.
pub fn condition_bound(n: usize, s: usize, nu: usize, kappa: f64) -> f64 {
    (s * s * nu) as f64 * (4.0 * n as f64 / kappa).powi(s as i32 - 1)
}

/// Distance from row `j` to the span of the other rows, with the chain
/// `bound <= 1/|c_j|_2 <= actual`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RowDistance {
    pub node: usize,
    pub dist_actual: f64,
    pub dist_lower_via_cj: f64,
    pub dist_bound: f64,
    pub bound_le_cj: Inequality,
    pub cj_le_actual: Inequality,
}

impl RowDistance {
    pub fn holds(&self) -> bool {
        self.bound_le_cj.holds && self.cj_le_actual.holds
    }
}

pub fn row_distance_certificate(
    sys: &VandermondeSystem,
    j: usize,
    cert: &DirectionCertificate,
) -> Result<RowDistance> {
    sys.require_high_degree()?;
    let q = lagrange_polynomial(&sys.nodes, j, cert, &sys.order)?;
    row_distance_with(sys, j, cert, &q)
}

fn row_distance_with(
    sys: &VandermondeSystem,
    j: usize,
    cert: &DirectionCertificate,
    q: &MultivariatePolynomial,
) -> Result<RowDistance> {
    let dist_actual = distance_to_span(sys.matrix.row(j), &sys.other_rows(j))?;
    let dist_lower_via_cj = 1.0 / q.coeffs().l2_norm();
    let dist_bound = distance_bound(sys.n(), sys.s(), sys.nu(), cert.delta);
    Ok(RowDistance {
        node: j,
        dist_actual,
        dist_lower_via_cj,
        dist_bound,
        bound_le_cj: Inequality::lower(dist_bound, dist_lower_via_cj),
        cj_le_actual: Inequality::lower(dist_lower_via_cj, dist_actual),
    })
}

/// Angle between row `j` and the span of the other rows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RowAngle {
    pub node: usize,
    pub sin_actual: f64,
    pub sin_bound: f64,
    pub row_norm: f64,
    pub sin_check: Inequality,
    /// `|V_N(z_j)|_2 <= √ν`.
    pub row_norm_check: Inequality,
}

impl RowAngle {
    pub fn holds(&self) -> bool {
        self.sin_check.holds && self.row_norm_check.holds
    }
}

pub fn row_angle(
    sys: &VandermondeSystem,
    j: usize,
    cert: &DirectionCertificate,
) -> Result<RowAngle> {
    let dist = row_distance_certificate(sys, j, cert)?;
    Ok(row_angle_from(sys, &dist))
}

fn row_angle_from(sys: &VandermondeSystem, dist: &RowDistance) -> RowAngle {
    let row_norm = norm2(sys.matrix.row(dist.node));
    // the constant monomial makes every row non-zero
    assert!(
        row_norm >= 1.0,
        "Vandermonde row without its constant entry"
    );
    let sqrt_nu = (sys.nu() as f64).sqrt();
    let sin_actual = dist.dist_actual / row_norm;
    let sin_bound = dist.dist_bound / sqrt_nu;
    RowAngle {
        node: dist.node,
        sin_actual,
        sin_bound,
        row_norm,
        sin_check: Inequality::lower(sin_bound, sin_actual),
        row_norm_check: Inequality::upper(row_norm, sqrt_nu),
    }
}

/// Singular values of `V` against their bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralCertificate {
    pub singular_values: Vec<f64>,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub sigma_min_bound: f64,
    pub sigma_max_bound: f64,
    pub cond: f64,
    pub cond_bound: f64,
    pub rank: usize,
    pub sigma_min_check: Inequality,
    pub sigma_max_check: Inequality,
    pub cond_check: Inequality,
}

impl SpectralCertificate {
    pub fn full_rank(&self) -> bool {
        self.rank == self.singular_values.len()
    }

    pub fn holds(&self) -> bool {
        self.sigma_min_check.holds
            && self.sigma_max_check.holds
            && self.cond_check.holds
            && self.full_rank()
    }
}

pub fn spectral_certificate(
    sys: &VandermondeSystem,
    kappa_hat: f64,
) -> Result<SpectralCertificate> {
    sys.require_high_degree()?;
    if kappa_hat.is_nan() || kappa_hat <= 0.0 {
        return Err(Error::Contract(format!(
            "kappa estimate must be positive, got {kappa_hat}"
        )));
    }
    let (n, s, nu) = (sys.n(), sys.s(), sys.nu());
    let sigma = singular_values(&sys.matrix)?;
    let sigma_max = sigma[0];
    let sigma_min = sigma[s - 1];
    let rank = rank_estimate(&sys.matrix, DEFAULT_RANK_TOL)?;
    let lo = sigma_min_bound(n, s, nu, kappa_hat);
    let hi = sigma_max_bound(s, nu);
    let cond = sigma_max / sigma_min;
    let cond_bound = condition_bound(n, s, nu, kappa_hat);
    Ok(SpectralCertificate {
        singular_values: sigma,
        sigma_min,
        sigma_max,
        sigma_min_bound: lo,
        sigma_max_bound: hi,
        cond,
        cond_bound,
        rank,
        sigma_min_check: Inequality::lower(lo, sigma_min),
        sigma_max_check: Inequality::upper(sigma_max, hi),
        cond_check: Inequality::upper(cond, cond_bound),
    })
}

/// `σ_min(V) >= 1/|B|` for a verified right inverse `B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RightInverseRelation {
    pub residual: f64,
    pub sigma_min: f64,
    pub right_inverse_norm: f64,
    pub check: Inequality,
}

pub fn right_inverse_sigma_relation(
    sys: &VandermondeSystem,
    vplus: &DenseMatrix,
) -> Result<RightInverseRelation> {
    let product = sys.matrix.matmul(vplus)?;
    if product.rows() != product.cols() {
        return Err(Error::DimensionMismatch {
            expected: product.rows(),
            got: product.cols(),
        });
    }
    let residual = product.max_abs_diff(&DenseMatrix::identity(sys.s()));
    if residual.is_nan() || residual > IDENTITY_TOLERANCE {
        return Err(Error::Contract(format!(
            "V·B differs from the identity by {residual:e}"
        )));
    }
    let sigma_min = singular_values(&sys.matrix)?[sys.s() - 1];
    let right_inverse_norm = singular_values(vplus)?[0];
    Ok(RightInverseRelation {
        residual,
        sigma_min,
        right_inverse_norm,
        check: Inequality::with_absolute_slack(
            1.0 / right_inverse_norm,
            sigma_min,
            RIGHT_INVERSE_SLACK,
        ),
    })
}

/// Size limits applied by [`analyze`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Limits {
    pub max_nodes: usize,
    pub max_dim: usize,
    pub max_degree: usize,
    pub max_nu: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_nodes: 8,
            max_dim: 4,
            max_degree: 16,
            max_nu: 5000,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub search: SearchConfig,
    pub limits: Limits,
}

/// Per-node quantities and their bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub j: usize,
    pub delta_j: f64,
    pub exact: bool,
    pub direction: Vec<f64>,
    pub dist_actual: f64,
    pub dist_lower_via_cj: f64,
    pub dist_bound: f64,
    pub sin_theta_actual: f64,
    pub sin_theta_bound: f64,
    pub row_norm: f64,
    pub qj_norm: f64,
    pub qj_sharp_bound: f64,
    pub qj_bound: f64,
    pub kronecker_defect: f64,
}

/// Whole-matrix quantities and their bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlobalRecord {
    pub n: usize,
    pub s: usize,
    pub degree: usize,
    pub nu: usize,
    pub kappa_hat: f64,
    pub sigma_min_actual: f64,
    pub sigma_min_bound: f64,
    pub sigma_min_column_bound: f64,
    pub sigma_max_actual: f64,
    pub sigma_max_bound: f64,
    pub rinv_norm_actual: f64,
    pub rinv_norm_bound: f64,
    pub rinv_residual: f64,
    /// Norm of the Moore–Penrose pseudoinverse, `1/σ_min`.
    pub pinv_norm: f64,
    pub cond_actual: f64,
    pub cond_bound: f64,
    pub interpolant_norm: f64,
    pub interpolant_bound: f64,
    pub rank: usize,
    pub full_rank_expected: bool,
    pub kernel_dim: usize,
    pub kernel_dim_expected: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub per_node: Vec<NodeRecord>,
    pub global: GlobalRecord,
    pub all_pass: bool,
    /// One line per failed claim, naming it and both sides.
    pub failures: Vec<String>,
}

struct Ledger(Vec<String>);

impl Ledger {
    fn check(&mut self, name: impl FnOnce() -> String, q: Inequality) {
        if !q.holds {
            self.0
                .push(format!("{}: lhs {:e} vs rhs {:e}", name(), q.lhs, q.rhs));
        }
    }

    fn require(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.0.push(msg());
        }
    }
}

fn check_limits(nodes: &NodeSet, degree: usize, limits: &Limits) -> Result<()> {
    if nodes.len() > limits.max_nodes {
        return Err(Error::Guardrail(format!(
            "{} nodes exceed {}",
            nodes.len(),
            limits.max_nodes
        )));
    }
    if nodes.dim() > limits.max_dim {
        return Err(Error::Guardrail(format!(
            "dimension {} exceeds {}",
            nodes.dim(),
            limits.max_dim
        )));
    }
    if degree > limits.max_degree {
        return Err(Error::Guardrail(format!(
            "degree {degree} exceeds {}",
            limits.max_degree
        )));
    }
    let nu = dimension(nodes.dim(), degree)?;
    if nu > limits.max_nu {
        return Err(Error::Guardrail(format!(
            "nu = {nu} exceeds {}",
            limits.max_nu
        )));
    }
    Ok(())
}

/// Runs geometry, construction and every certificate for `(Z, N)`.
pub fn analyze(nodes: &NodeSet, degree: usize, config: &AnalysisConfig) -> Result<StabilityReport> {
    let s = nodes.len();
    if degree + 1 < s {
        return Err(Error::DegreeTooLow {
            degree,
            required: s - 1,
        });
    }
    check_limits(nodes, degree, &config.limits)?;
    let n = nodes.dim();

    let (kappa_hat, certs) =
        kappa_lower_bound(nodes, &config.search).map_err(Error::at("geometry"))?;
    let sys = build(nodes, degree).map_err(Error::at("vandermonde"))?;
    let nu = sys.nu();
    let polys = lagrange_polynomials(&sys, &certs).map_err(Error::at("construction"))?;

    let mut ledger = Ledger(Vec::new());
    let mut per_node = Vec::with_capacity(s);
    for (j, (cert, q)) in certs.iter().zip(&polys).enumerate() {
        let defect = kronecker_defect(q, nodes, j).map_err(Error::at("construction"))?;
        ledger.require(defect <= IDENTITY_TOLERANCE, || {
            format!("node {j}: |Q_j(z_i) - delta_ij| = {defect:e} exceeds {IDENTITY_TOLERANCE:e}")
        });
        let coeff = check_coefficient_bounds(q, nodes, cert);
        ledger.check(
            || format!("node {j}: |Q_j|_inf <= (2n/delta)^(s-1)"),
            coeff.sharp,
        );
        ledger.check(
            || format!("node {j}: |Q_j|_inf <= s(4n/delta)^(s-1)"),
            coeff.lemma,
        );

        let dist = row_distance_with(&sys, j, cert, q).map_err(Error::at("row distance"))?;
        ledger.check(
            || format!("node {j}: dist_bound <= 1/|c_j|_2"),
            dist.bound_le_cj,
        );
        ledger.check(
            || format!("node {j}: 1/|c_j|_2 <= dist_actual"),
            dist.cj_le_actual,
        );
        let angle = row_angle_from(&sys, &dist);
        ledger.check(
            || format!("node {j}: sin_bound <= sin_actual"),
            angle.sin_check,
        );
        ledger.check(
            || format!("node {j}: |row|_2 <= sqrt(nu)"),
            angle.row_norm_check,
        );

        per_node.push(NodeRecord {
            j,
            delta_j: cert.delta,
            exact: cert.exact,
            direction: cert.direction.clone(),
            dist_actual: dist.dist_actual,
            dist_lower_via_cj: dist.dist_lower_via_cj,
            dist_bound: dist.dist_bound,
            sin_theta_actual: angle.sin_actual,
            sin_theta_bound: angle.sin_bound,
            row_norm: angle.row_norm,
            qj_norm: q.max_norm(),
            qj_sharp_bound: sharp_coefficient_bound(n, s, cert.delta),
            qj_bound: coefficient_bound(n, s, cert.delta),
            kronecker_defect: defect,
        });
    }

    let spectral = spectral_certificate(&sys, kappa_hat).map_err(Error::at("spectrum"))?;
    ledger.check(
        || "sigma_min >= sigma_min_bound".into(),
        spectral.sigma_min_check,
    );
    ledger.check(
        || "sigma_max <= sqrt(s nu)".into(),
        spectral.sigma_max_check,
    );
    ledger.check(
        || "cond <= s^2 nu (4n/kappa)^(s-1)".into(),
        spectral.cond_check,
    );
    ledger.require(spectral.full_rank(), || {
        format!("rank {} below s = {s}", spectral.rank)
    });

    let min_dist = per_node
        .iter()
        .map(|r| r.dist_actual)
        .fold(f64::INFINITY, f64::min);
    let column_bound = min_dist / (s as f64).sqrt();
    ledger.check(
        || "min_j dist_j / sqrt(s) <= sigma_min".into(),
        Inequality::with_absolute_slack(column_bound, spectral.sigma_min, RIGHT_INVERSE_SLACK),
    );

    let cols: Vec<Vec<f64>> = polys
        .iter()
        .map(|q| q.coeffs().as_slice().to_vec())
        .collect();
    let vplus = DenseMatrix::from_columns(&cols).map_err(Error::at("right inverse"))?;
    let residual = sys
        .matrix
        .matmul(&vplus)
        .map_err(Error::at("right inverse"))?
        .max_abs_diff(&DenseMatrix::identity(s));
    ledger.require(residual <= IDENTITY_TOLERANCE, || {
        format!("|V V+ - I|_max = {residual:e} exceeds {IDENTITY_TOLERANCE:e}")
    });
    let rinv_norm = singular_values(&vplus).map_err(Error::at("right inverse"))?[0];
    let rinv_bound = right_inverse_norm_bound(n, s, nu, kappa_hat);
    ledger.check(
        || "|V+| <= s^(3/2) sqrt(nu) (4n/kappa)^(s-1)".into(),
        Inequality::upper(rinv_norm, rinv_bound),
    );
    ledger.check(
        || "1/|V+| <= sigma_min".into(),
        Inequality::with_absolute_slack(1.0 / rinv_norm, spectral.sigma_min, RIGHT_INVERSE_SLACK),
    );

    // interpolant of the all-ones data: the row sums of V+
    let ones: Vec<f64> = (0..nu).map(|k| vplus.row(k).iter().sum()).collect();
    let interpolant_norm = ones.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let interpolant_bound = (s * s) as f64 * (4.0 * n as f64 / kappa_hat).powi(s as i32 - 1);
    ledger.check(
        || "|P|_inf <= s^2 |y|_inf (4n/kappa)^(s-1)".into(),
        Inequality::upper(interpolant_norm, interpolant_bound),
    );

    let kernel_dim = nu - spectral.rank;
    let kernel_dim_expected = nu - s;
    ledger.require(kernel_dim == kernel_dim_expected, || {
        format!("kernel dimension {kernel_dim} differs from nu - s = {kernel_dim_expected}")
    });

    let global = GlobalRecord {
        n,
        s,
        degree,
        nu,
        kappa_hat,
        sigma_min_actual: spectral.sigma_min,
        sigma_min_bound: spectral.sigma_min_bound,
        sigma_min_column_bound: column_bound,
        sigma_max_actual: spectral.sigma_max,
        sigma_max_bound: spectral.sigma_max_bound,
        rinv_norm_actual: rinv_norm,
        rinv_norm_bound: rinv_bound,
        rinv_residual: residual,
        pinv_norm: 1.0 / spectral.sigma_min,
        cond_actual: spectral.cond,
        cond_bound: spectral.cond_bound,
        interpolant_norm,
        interpolant_bound,
        rank: spectral.rank,
        full_rank_expected: true,
        kernel_dim,
        kernel_dim_expected,
    };
    let failures = ledger.0;
    Ok(StabilityReport {
        per_node,
        global,
        all_pass: failures.is_empty(),
        failures,
    })
}
