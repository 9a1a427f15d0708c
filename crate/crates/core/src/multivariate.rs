//! Coefficient-bounded multivariate Lagrange polynomials.
//!
//! `Q_j(z) = p_j(<v, z>)` where `p_j` is the univariate Lagrange basis
//! polynomial on the projected nodes `t_i = <v, z_i>` and `v` is the
//! direction of a [`DirectionCertificate`]. Expanding the powers of the
//! linear form with the multinomial theorem gives the monomial coefficients
//! `c_α = a_{|α|} · C(|α|; α) · v^α`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{DirectionCertificate, NodeSet};
use crate::multiindex::{multinomial, power_table, MonomialOrder};
use crate::report::Inequality;
use crate::univariate::{lagrange_product_coeffs, CoeffVector};

/// A polynomial in the graded monomial basis of `order`.
#[derive(Debug, Clone)]
pub struct MultivariatePolynomial {
    order: Arc<MonomialOrder>,
    coeffs: CoeffVector,
}

impl MultivariatePolynomial {
    pub fn new(order: Arc<MonomialOrder>, coeffs: CoeffVector) -> Result<Self> {
        if coeffs.len() != order.len() {
            return Err(Error::DimensionMismatch {
                expected: order.len(),
                got: coeffs.len(),
            });
        }
        Ok(MultivariatePolynomial { order, coeffs })
    }

    pub fn zero(order: Arc<MonomialOrder>) -> Self {
        let coeffs = CoeffVector::zeros(order.len());
        MultivariatePolynomial { order, coeffs }
    }

    pub fn order(&self) -> &Arc<MonomialOrder> {
        &self.order
    }

    pub fn coeffs(&self) -> &CoeffVector {
        &self.coeffs
    }

    pub fn max_norm(&self) -> f64 {
        self.coeffs.max_norm()
    }

    /// Largest total degree carrying a non-zero coefficient.
    pub fn effective_degree(&self) -> Option<usize> {
        self.order
            .indices()
            .iter()
            .zip(self.coeffs.as_slice())
            .filter(|(_, &c)| c != 0.0)
            .map(|(a, _)| a.degree())
            .max()
    }

    /// `Σ_α c_α z^α`, summed in the graded order.
    pub fn evaluate(&self, z: &[f64]) -> Result<f64> {
        if z.len() != self.order.n() {
            return Err(Error::DimensionMismatch {
                expected: self.order.n(),
                got: z.len(),
            });
        }
        let table = power_table(z, self.order.degree());
        let mut acc = 0.0;
        for (alpha, &c) in self.order.indices().iter().zip(self.coeffs.as_slice()) {
            if c == 0.0 {
                continue;
            }
            let mono: f64 = alpha
                .exponents()
                .iter()
                .enumerate()
                .map(|(l, &a)| table[l][a as usize])
                .product();
            acc += c * mono;
        }
        Ok(acc)
    }

    fn axpy(&mut self, a: f64, other: &MultivariatePolynomial) {
        for (x, y) in self
            .coeffs
            .as_mut_slice()
            .iter_mut()
            .zip(other.coeffs.as_slice())
        {
            *x += a * y;
        }
    }
}

/// Expansion of `p(<v, z>)` in the monomial basis of `order`.
pub fn compose_linear(
    p: &CoeffVector,
    v: &[f64],
    order: &Arc<MonomialOrder>,
) -> Result<MultivariatePolynomial> {
    if v.len() != order.n() {
        return Err(Error::DimensionMismatch {
            expected: order.n(),
            got: v.len(),
        });
    }
    let d = p.len().saturating_sub(1);
    if d > order.degree() {
        return Err(Error::Contract(format!(
            "univariate degree {d} exceeds the basis degree {}",
            order.degree()
        )));
    }
    let vpow = power_table(v, d);
    let mut coeffs = vec![0.0; order.len()];
    for (slot, alpha) in coeffs.iter_mut().zip(order.indices()) {
        let k = alpha.degree();
        if k > d || p.as_slice()[k] == 0.0 {
            continue;
        }
        let v_alpha: f64 = alpha
            .exponents()
            .iter()
            .enumerate()
            .map(|(l, &a)| vpow[l][a as usize])
            .product();
        *slot = p.as_slice()[k] * multinomial(k, alpha)? as f64 * v_alpha;
    }
    MultivariatePolynomial::new(order.clone(), CoeffVector::new(coeffs))
}

/// Projected nodes `t_i = <v, z_i>`.
pub fn project_nodes(nodes: &NodeSet, v: &[f64]) -> Vec<f64> {
    nodes
        .points()
        .iter()
        .map(|z| z.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// `Q_j` built from the direction of `cert`; `Q_j(z_i) = δ_ij`.
pub fn lagrange_polynomial(
    nodes: &NodeSet,
    j: usize,
    cert: &DirectionCertificate,
    order: &Arc<MonomialOrder>,
) -> Result<MultivariatePolynomial> {
    nodes.check_index(j)?;
    check_order(nodes, order)?;
    if cert.node != j {
        return Err(Error::Contract(format!(
            "certificate belongs to node {}, not {j}",
            cert.node
        )));
    }
    cert.verify(nodes)?;
    let p = lagrange_product_coeffs(&project_nodes(nodes, &cert.direction), j)?;
    compose_linear(&p, &cert.direction, order)
}

/// `P = Σ_j y_j Q_j`, an interpolant of `y` at the nodes.
pub fn interpolant(
    nodes: &NodeSet,
    y: &[f64],
    certs: &[DirectionCertificate],
    order: &Arc<MonomialOrder>,
) -> Result<MultivariatePolynomial> {
    let s = nodes.len();
    if y.len() != s {
        return Err(Error::DimensionMismatch {
            expected: s,
            got: y.len(),
        });
    }
    if certs.len() != s {
        return Err(Error::DimensionMismatch {
            expected: s,
            got: certs.len(),
        });
    }
    check_order(nodes, order)?;
    let mut p = MultivariatePolynomial::zero(order.clone());
    for (j, (&yj, cert)) in y.iter().zip(certs).enumerate() {
        if yj == 0.0 {
            continue;
        }
        let q = lagrange_polynomial(nodes, j, cert, order)?;
        p.axpy(yj, &q);
    }
    Ok(p)
}

fn check_order(nodes: &NodeSet, order: &MonomialOrder) -> Result<()> {
    if order.n() != nodes.dim() {
        return Err(Error::DimensionMismatch {
            expected: nodes.dim(),
            got: order.n(),
        });
    }
    let required = nodes.len() - 1;
    if order.degree() < required {
        return Err(Error::DegreeTooLow {
            degree: order.degree(),
            required,
        });
    }
    Ok(())
}

/// `(2n/δ)^{s−1}`: the bound on `|Q_j|_∞` for a direction achieving gap `δ`.
pub fn sharp_coefficient_bound(n: usize, s: usize, delta: f64) -> f64 {
    (2.0 * n as f64 / delta).powi(s as i32 - 1)
}

/// `s (4n/δ)^{s−1}`.
pub fn coefficient_bound(n: usize, s: usize, delta: f64) -> f64 {
    s as f64 * (4.0 * n as f64 / delta).powi(s as i32 - 1)
}

/// Coefficient-size claims for one `Q_j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientBounds {
    /// Against `(2n/δ_v)^{s−1}`.
    pub sharp: Inequality,
    /// Against `s(4n/δ)^{s−1}`.
    pub lemma: Inequality,
}

pub fn check_coefficient_bounds(
    q: &MultivariatePolynomial,
    nodes: &NodeSet,
    cert: &DirectionCertificate,
) -> CoefficientBounds {
    let (n, s) = (nodes.dim(), nodes.len());
    let norm = q.max_norm();
    CoefficientBounds {
        sharp: Inequality::upper(norm, sharp_coefficient_bound(n, s, cert.delta)),
        lemma: Inequality::upper(norm, coefficient_bound(n, s, cert.delta)),
    }
}

/// `|Q_j(z_i) − δ_ij|` maximised over `i`.
pub fn kronecker_defect(q: &MultivariatePolynomial, nodes: &NodeSet, j: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (i, z) in nodes.points().iter().enumerate() {
        let target = if i == j { 1.0 } else { 0.0 };
        worst = worst.max((q.evaluate(z)? - target).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{kappa_lower_bound, projection_separation, SearchConfig};
    use crate::multiindex::MultiIndex;
    use crate::sampling::random_nodeset;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn order(n: usize, d: usize) -> Arc<MonomialOrder> {
        Arc::new(MonomialOrder::new(n, d).unwrap())
    }

    fn set(dim: usize, pts: &[&[f64]]) -> NodeSet {
        NodeSet::new(dim, pts.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    #[test]
    fn compose_examples() {
        let o = order(2, 1);
        let p = compose_linear(&CoeffVector::new(vec![0.0, 1.0]), &[0.6, 0.8], &o).unwrap();
        assert_eq!(p.coeffs().as_slice(), &[0.0, 0.6, 0.8]);

        let o = order(3, 3);
        let p = compose_linear(&CoeffVector::new(vec![1.0]), &[0.6, 0.0, 0.8], &o).unwrap();
        assert_eq!(p.coeffs().as_slice()[0], 1.0);
        assert!(p.coeffs().as_slice()[1..].iter().all(|&c| c == 0.0));

        let o = order(2, 2);
        let p = compose_linear(&CoeffVector::new(vec![0.0, 0.0, 1.0]), &[1.0, 0.0], &o).unwrap();
        let at = o.index_of(&MultiIndex::new(vec![2, 0])).unwrap();
        for (i, &c) in p.coeffs().as_slice().iter().enumerate() {
            assert_eq!(c, if i == at { 1.0 } else { 0.0 });
        }
    }

    #[test]
    fn compose_rejects_high_degree() {
        let o = order(2, 1);
        assert!(compose_linear(&CoeffVector::new(vec![0.0, 0.0, 1.0]), &[1.0, 0.0], &o).is_err());
    }

    #[test]
    fn axis_direction_embeds_univariate_coefficients() {
        let o = order(3, 4);
        let p = CoeffVector::new(vec![0.3, -1.2, 0.0, 2.5, 0.7]);
        let q = compose_linear(&p, &[1.0, 0.0, 0.0], &o).unwrap();
        for (alpha, &c) in o.indices().iter().zip(q.coeffs().as_slice()) {
            let e = alpha.exponents();
            if e[1] == 0 && e[2] == 0 {
                assert_eq!(c, p.as_slice()[e[0] as usize]);
            } else {
                assert_eq!(c, 0.0);
            }
        }
    }

    #[test]
    fn lagrange_examples() {
        let z = set(1, &[&[-0.5], &[0.5]]);
        let o = order(1, 1);
        let cert = projection_separation(&z, 0, &SearchConfig::default()).unwrap();
        let q = lagrange_polynomial(&z, 0, &cert, &o).unwrap();
        assert_eq!(q.coeffs().as_slice(), &[0.5, -1.0]);

        let z = set(2, &[&[0.0, 0.0], &[1.0, 0.0]]);
        let o = order(2, 1);
        let cert = DirectionCertificate {
            node: 0,
            direction: vec![1.0, 0.0],
            delta: 1.0,
            exact: true,
        };
        let q = lagrange_polynomial(&z, 0, &cert, &o).unwrap();
        assert_eq!(q.coeffs().as_slice(), &[1.0, -1.0, 0.0]);
    }

    #[test]
    fn lagrange_errors() {
        let z = set(1, &[&[-0.5], &[0.0], &[0.5]]);
        let cert = projection_separation(&z, 0, &SearchConfig::default()).unwrap();
        assert!(matches!(
            lagrange_polynomial(&z, 0, &cert, &order(1, 1)),
            Err(Error::DegreeTooLow {
                degree: 1,
                required: 2
            })
        ));
        let mut stale = cert.clone();
        stale.delta = 0.9;
        assert!(matches!(
            lagrange_polynomial(&z, 0, &stale, &order(1, 2)),
            Err(Error::StaleCertificate { .. })
        ));
    }

    #[test]
    fn evaluate_examples() {
        let o = order(2, 2);
        assert_eq!(
            MultivariatePolynomial::zero(o.clone())
                .evaluate(&[0.3, 0.1])
                .unwrap(),
            0.0
        );
        let mut c = vec![0.0; 6];
        c[o.index_of(&MultiIndex::new(vec![1, 1])).unwrap()] = 1.0;
        let p = MultivariatePolynomial::new(o.clone(), CoeffVector::new(c)).unwrap();
        assert_eq!(p.evaluate(&[0.5, 0.5]).unwrap(), 0.25);
        // 1 + 2(0.1) + 3(0.2)
        let p = MultivariatePolynomial::new(order(2, 1), CoeffVector::new(vec![1.0, 2.0, 3.0]))
            .unwrap();
        assert!((p.evaluate(&[0.1, 0.2]).unwrap() - 1.8).abs() < 1e-15);
        assert!(p.evaluate(&[0.1]).is_err());
    }

    #[test]
    fn interpolant_examples() {
        let z = set(1, &[&[-0.5], &[0.5]]);
        let o = order(1, 1);
        let (_, certs) = kappa_lower_bound(&z, &SearchConfig::default()).unwrap();
        let p = interpolant(&z, &[1.0, 1.0], &certs, &o).unwrap();
        assert_eq!(p.coeffs().as_slice(), &[1.0, 0.0]);
        let p = interpolant(&z, &[0.0, 0.0], &certs, &o).unwrap();
        assert_eq!(p.coeffs().as_slice(), &[0.0, 0.0]);
        let p = interpolant(&z, &[0.0, 1.0], &certs, &o).unwrap();
        let q = lagrange_polynomial(&z, 1, &certs[1], &o).unwrap();
        assert_eq!(p.coeffs(), q.coeffs());
    }

    #[test]
    fn random_instances_satisfy_construction_claims() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let cfg = SearchConfig::default();
        for _ in 0..200 {
            let s = rng.gen_range(2..=6);
            let n = rng.gen_range(1..=4);
            let extra = [0, 1, 3][rng.gen_range(0..3)];
            let z = random_nodeset(&mut rng, s, n);
            let o = order(n, s - 1 + extra);
            let (_, certs) = kappa_lower_bound(&z, &cfg).unwrap();
            for (j, cert) in certs.iter().enumerate() {
                let q = lagrange_polynomial(&z, j, cert, &o).unwrap();
                assert!(kronecker_defect(&q, &z, j).unwrap() <= 1e-8);
                let b = check_coefficient_bounds(&q, &z, cert);
                assert!(b.sharp.holds && b.lemma.holds, "{b:?}");
                assert!(q.effective_degree().unwrap_or(0) < s);
            }
            let y: Vec<f64> = (0..s).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let ymax = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let p = interpolant(&z, &y, &certs, &o).unwrap();
            for (zi, yi) in z.points().iter().zip(&y) {
                assert!((p.evaluate(zi).unwrap() - yi).abs() <= 1e-8 * ymax.max(1.0));
            }
            let worst = certs
                .iter()
                .map(|c| sharp_coefficient_bound(n, s, c.delta))
                .fold(0.0, f64::max);
            assert!(Inequality::upper(p.max_norm(), s as f64 * ymax * worst).holds);
        }
    }
}
