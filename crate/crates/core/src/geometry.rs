//! Max–min projection separation.
//!
//! For node `j` the separation is the best worst-case gap
//! `max_{|v|=1} min_{i≠j} |<v, z_j − z_i>|`. It is computed exactly for
//! `n = 1`, for two nodes, and in the plane; in higher dimensions the search
//! returns a certified lower bound together with the direction attaining it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack allowed on `|z_i| <= 1` to absorb decimal input rounding.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Largest discrepancy between a certificate's stored gap and the gap
/// recomputed from its direction before the certificate counts as stale.
pub const CERTIFICATE_TOLERANCE: f64 = 1e-9;

/// `s >= 2` distinct points of the closed unit ball in `R^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeSet {
    dim: usize,
    points: Vec<Vec<f64>>,
}

impl NodeSet {
    pub fn new(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidNodeSet("dimension must be at least 1".into()));
        }
        if points.len() < 2 {
            return Err(Error::InvalidNodeSet(format!(
                "need at least 2 nodes, got {}",
                points.len()
            )));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::InvalidNodeSet(format!(
                    "point {i} has {} coordinates, expected {dim}",
                    p.len()
                )));
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidNodeSet(format!(
                    "point {i} has a non-finite coordinate"
                )));
            }
            let norm = norm2(p);
            if norm > 1.0 + NORM_TOLERANCE {
                return Err(Error::InvalidNodeSet(format!(
                    "point {i} has norm {norm} outside the unit ball"
                )));
            }
        }
        for i in 0..points.len() {
            for k in 0..i {
                if points[i] == points[k] {
                    return Err(Error::InvalidNodeSet(format!(
                        "points {k} and {i} coincide"
                    )));
                }
            }
        }
        Ok(NodeSet { dim, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of nodes `s`.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub(crate) fn check_index(&self, j: usize) -> Result<()> {
        if j >= self.len() {
            return Err(Error::IndexOutOfRange {
                index: j,
                count: self.len(),
            });
        }
        Ok(())
    }

    /// Differences `z_j − z_i` for all `i ≠ j`, in index order.
    pub fn differences(&self, j: usize) -> Vec<Vec<f64>> {
        let zj = &self.points[j];
        self.points
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .map(|(_, zi)| zj.iter().zip(zi).map(|(a, b)| a - b).collect())
            .collect()
    }
}

/// A unit direction and the projection gap it achieves for one node.
///
/// `delta` is always a lower bound on the separation of that node; `exact`
/// records whether the solver that produced it is known to attain the
/// optimum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionCertificate {
    pub node: usize,
    pub direction: Vec<f64>,
    pub delta: f64,
    pub exact: bool,
}

impl DirectionCertificate {
    /// Recomputes the gap of the stored direction against `nodes`.
    pub fn recompute(&self, nodes: &NodeSet) -> f64 {
        achieved_gap(nodes, self.node, &self.direction)
    }

    pub fn verify(&self, nodes: &NodeSet) -> Result<()> {
        nodes.check_index(self.node)?;
        if self.direction.len() != nodes.dim() {
            return Err(Error::DimensionMismatch {
                expected: nodes.dim(),
                got: self.direction.len(),
            });
        }
        let recomputed = self.recompute(nodes);
        if self.delta.is_nan()
            || self.delta <= 0.0
            || (recomputed - self.delta).abs() > CERTIFICATE_TOLERANCE
        {
            return Err(Error::StaleCertificate {
                node: self.node,
                stored: self.delta,
                recomputed,
            });
        }
        Ok(())
    }
}

/// Budget of the direction search used when no exact solver applies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Number of seeded random unit directions added to the candidates.
    pub random_directions: usize,
    pub seed: u64,
    pub ascent_iterations: usize,
    pub initial_step: f64,
    pub min_step: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            random_directions: 1024,
            seed: 0,
            ascent_iterations: 64,
            initial_step: 0.25,
            min_step: 1e-6,
        }
    }
}

/// `min_{i≠j} |<v, z_j − z_i>|`.
pub fn achieved_gap(nodes: &NodeSet, j: usize, v: &[f64]) -> f64 {
    let zj = nodes.point(j);
    nodes
        .points()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != j)
        .map(|(_, zi)| {
            zj.iter()
                .zip(zi)
                .zip(v)
                .map(|((a, b), c)| (a - b) * c)
                .sum::<f64>()
                .abs()
        })
        .fold(f64::INFINITY, f64::min)
}

fn min_abs_projection(diffs: &[Vec<f64>], v: &[f64]) -> f64 {
    diffs
        .iter()
        .map(|u| dot(u, v).abs())
        .fold(f64::INFINITY, f64::min)
}

/// Separation of node `j`, exact where a closed-form solver applies and a
/// certified lower bound otherwise.
pub fn projection_separation(
    nodes: &NodeSet,
    j: usize,
    config: &SearchConfig,
) -> Result<DirectionCertificate> {
    nodes.check_index(j)?;
    let cert = if nodes.dim() == 1 {
        let v = vec![1.0];
        DirectionCertificate {
            node: j,
            delta: achieved_gap(nodes, j, &v),
            direction: v,
            exact: true,
        }
    } else if nodes.len() == 2 {
        let u = &nodes.differences(j)[0];
        let v = normalized(u).expect("distinct nodes have a non-zero difference");
        DirectionCertificate {
            node: j,
            delta: achieved_gap(nodes, j, &v),
            direction: v,
            exact: true,
        }
    } else if nodes.dim() == 2 {
        exact_rho_planar(nodes, j)?
    } else {
        search_separation(nodes, j, config)
    };
    debug_assert!(cert.delta > 0.0);
    Ok(cert)
}

/// Exact separation in the plane.
///
/// With `v = (cos θ, sin θ)` each term is `r_i |cos(θ − φ_i)|`, so the
/// maximum of the lower envelope sits either at a peak `θ = φ_i` of one term
/// or where two terms cross, i.e. where `v ⟂ u_i ∓ u_k`. All `O(s²)` such
/// directions are evaluated and the best one (lowest candidate index on
/// ties) is returned.
pub fn exact_rho_planar(nodes: &NodeSet, j: usize) -> Result<DirectionCertificate> {
    if nodes.dim() != 2 {
        return Err(Error::Contract(format!(
            "planar solver needs n = 2, got n = {}",
            nodes.dim()
        )));
    }
    nodes.check_index(j)?;
    let diffs = nodes.differences(j);
    let mut candidates: Vec<Vec<f64>> = Vec::with_capacity(diffs.len() * diffs.len());
    for u in &diffs {
        candidates.extend(normalized(u));
    }
    for a in 0..diffs.len() {
        for b in (a + 1)..diffs.len() {
            let (ua, ub) = (&diffs[a], &diffs[b]);
            for sign in [-1.0, 1.0] {
                let w = [ua[0] + sign * ub[0], ua[1] + sign * ub[1]];
                candidates.extend(normalized(&[-w[1], w[0]]));
            }
        }
    }
    let (best, _) = best_candidate(&diffs, &candidates);
    let v = candidates[best].clone();
    Ok(DirectionCertificate {
        node: j,
        delta: achieved_gap(nodes, j, &v),
        direction: v,
        exact: true,
    })
}

/// Lower bound on the separation for `n >= 3`.
///
/// Candidates are the normalised differences followed by the seeded random
/// directions. Each prefix `R, R/2, R/4, ..., 0` of the random list
/// contributes its best candidate as the start of a local ascent, so doubling
/// the budget only ever adds starting points and never lowers the result.
fn search_separation(nodes: &NodeSet, j: usize, config: &SearchConfig) -> DirectionCertificate {
    let n = nodes.dim();
    let diffs = nodes.differences(j);
    let mut candidates: Vec<Vec<f64>> = diffs.iter().filter_map(|u| normalized(u)).collect();
    let fixed = candidates.len();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..config.random_directions {
        candidates.push(random_unit(&mut rng, n));
    }

    let mut prefixes = Vec::new();
    let mut r = config.random_directions;
    loop {
        prefixes.push(r);
        if r == 0 {
            break;
        }
        r /= 2;
    }

    let mut best_v = candidates[0].clone();
    let mut best_gap = f64::NEG_INFINITY;
    // smallest prefix first so equal results keep the earliest start
    for &len in prefixes.iter().rev() {
        let (start, _) = best_candidate(&diffs, &candidates[..fixed + len]);
        let (v, gap) = local_ascent(&diffs, &candidates[start], config);
        if gap > best_gap {
            best_gap = gap;
            best_v = v;
        }
    }
    DirectionCertificate {
        node: j,
        delta: achieved_gap(nodes, j, &best_v),
        direction: best_v,
        exact: false,
    }
}

/// Index and value of the best candidate; the lowest index wins ties.
fn best_candidate(diffs: &[Vec<f64>], candidates: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in candidates.iter().enumerate() {
        let f = min_abs_projection(diffs, v);
        if f > best.1 {
            best = (i, f);
        }
    }
    best
}

/// Coordinate-perturbation hill climb on the sphere with step halving.
fn local_ascent(diffs: &[Vec<f64>], start: &[f64], config: &SearchConfig) -> (Vec<f64>, f64) {
    let n = start.len();
    let mut v = start.to_vec();
    let mut value = min_abs_projection(diffs, &v);
    let mut step = config.initial_step;
    let mut trial = vec![0.0; n];
    for _ in 0..config.ascent_iterations {
        if step < config.min_step {
            break;
        }
        let mut improved = false;
        for l in 0..n {
            for sign in [1.0, -1.0] {
                trial.copy_from_slice(&v);
                trial[l] += sign * step;
                let Some(t) = normalized(&trial) else {
                    continue;
                };
                let f = min_abs_projection(diffs, &t);
                if f > value {
                    value = f;
                    v = t;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (v, value)
}

/// Lower bound on `κ(Z) = min_j ρ(Z, j)` with one certificate per node.
pub fn kappa_lower_bound(
    nodes: &NodeSet,
    config: &SearchConfig,
) -> Result<(f64, Vec<DirectionCertificate>)> {
    let certs = (0..nodes.len())
        .map(|j| projection_separation(nodes, j, config))
        .collect::<Result<Vec<_>>>()?;
    let kappa = certs.iter().map(|c| c.delta).fold(f64::INFINITY, f64::min);
    Ok((kappa, certs))
}

pub(crate) fn random_unit<R: rand::Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let g: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
        if let Some(v) = normalized(&g) {
            return v;
        }
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn normalized(a: &[f64]) -> Option<Vec<f64>> {
    let norm = norm2(a);
    if norm > 0.0 && norm.is_finite() {
        Some(a.iter().map(|x| x / norm).collect())
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn set(dim: usize, pts: &[&[f64]]) -> NodeSet {
        NodeSet::new(dim, pts.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    /// Dense angular grid over `[0, π)`.
    fn angle_grid(nodes: &NodeSet, j: usize, samples: usize) -> f64 {
        let diffs = nodes.differences(j);
        (0..samples)
            .map(|k| {
                let th = std::f64::consts::PI * k as f64 / samples as f64;
                min_abs_projection(&diffs, &[th.cos(), th.sin()])
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn rejects_invalid_sets() {
        assert!(NodeSet::new(2, vec![vec![0.0, 0.0]]).is_err());
        assert!(NodeSet::new(2, vec![vec![0.0, 0.0], vec![0.0, 0.0]]).is_err());
        assert!(NodeSet::new(2, vec![vec![0.0, 0.0], vec![3.0, 0.0]]).is_err());
        assert!(NodeSet::new(2, vec![vec![0.0, 0.0], vec![0.5]]).is_err());
        assert!(NodeSet::new(1, vec![vec![1.0 + 1e-13], vec![0.0]]).is_ok());
    }

    #[test]
    fn index_out_of_range() {
        let z = set(1, &[&[0.0], &[0.5]]);
        assert!(matches!(
            projection_separation(&z, 2, &SearchConfig::default()),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn univariate_is_min_gap() {
        let z = set(1, &[&[-0.5], &[0.0], &[0.5]]);
        let c = projection_separation(&z, 1, &SearchConfig::default()).unwrap();
        assert_eq!(c.delta, 0.5);
        assert!(c.exact);
    }

    #[test]
    fn two_points_use_the_difference() {
        let z = set(2, &[&[0.0, 0.0], &[0.6, 0.8]]);
        let c = projection_separation(&z, 0, &SearchConfig::default()).unwrap();
        assert!((c.delta - 1.0).abs() < 1e-15);
        assert!(c.exact);
        let z = set(2, &[&[0.0, 0.0], &[0.5, 0.0]]);
        let c = exact_rho_planar(&z, 0).unwrap();
        assert_eq!(c.delta, 0.5);
        assert!((c.direction[0].abs() - 1.0).abs() < 1e-15 && c.direction[1].abs() < 1e-15);
    }

    #[test]
    fn planar_triangle_matches_grid() {
        let z = set(2, &[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]);
        let grid = angle_grid(&z, 0, 1_000_000);
        assert!((grid - FRAC_1_SQRT_2).abs() < 1e-5);
        let c = exact_rho_planar(&z, 0).unwrap();
        assert!((c.delta - FRAC_1_SQRT_2).abs() < 1e-9);
        assert!((c.delta - grid).abs() < 1e-5);
    }

    #[test]
    fn planar_asymmetric_matches_grid() {
        let z = set(2, &[&[-0.3, 0.0], &[0.3, 0.0], &[0.0, 0.4]]);
        let grid = angle_grid(&z, 2, 1_000_000);
        let c = exact_rho_planar(&z, 2).unwrap();
        assert!(c.delta >= grid - 1e-12);
        assert!((c.delta - grid).abs() < 1e-6, "{} vs {}", c.delta, grid);
    }

    #[test]
    fn planar_rejects_other_dimensions() {
        let z = set(3, &[&[0.0, 0.0, 0.0], &[0.5, 0.0, 0.0]]);
        assert!(matches!(exact_rho_planar(&z, 0), Err(Error::Contract(_))));
    }

    #[test]
    fn kappa_examples() {
        let z = set(1, &[&[-0.5], &[0.0], &[0.5]]);
        let (k, certs) = kappa_lower_bound(&z, &SearchConfig::default()).unwrap();
        assert_eq!(k, 0.5);
        assert_eq!(certs.len(), 3);
        let z = set(2, &[&[0.0, 0.0], &[0.6, 0.8]]);
        let (k, _) = kappa_lower_bound(&z, &SearchConfig::default()).unwrap();
        assert!((k - 1.0).abs() < 1e-15);
    }

    #[test]
    fn search_in_the_plane_never_beats_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..50 {
            let z = crate::sampling::random_nodeset(&mut rng, 5, 2);
            for j in 0..z.len() {
                let exact = exact_rho_planar(&z, j).unwrap();
                let searched = search_separation(&z, j, &SearchConfig::default());
                assert!(searched.delta <= exact.delta + 1e-12);
            }
        }
    }

    #[test]
    fn doubling_the_budget_never_hurts() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let z = crate::sampling::random_nodeset(&mut rng, 6, 3);
            for j in 0..z.len() {
                let mut last = 0.0;
                for r in [0, 1, 2, 4, 64, 128, 256] {
                    let cfg = SearchConfig {
                        random_directions: r,
                        ..SearchConfig::default()
                    };
                    let c = search_separation(&z, j, &cfg);
                    assert!(c.delta >= last, "budget {r}: {} < {last}", c.delta);
                    last = c.delta;
                }
            }
        }
    }

    #[test]
    fn spatial_kappa_below_large_budget_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let z = crate::sampling::random_nodeset(&mut rng, 4, 3);
        let (kappa, certs) = kappa_lower_bound(&z, &SearchConfig::default()).unwrap();
        // 1024 · 2^7 directions, a prefix-compatible multiple of the default
        let oracle_cfg = SearchConfig {
            random_directions: 1024 << 7,
            ..SearchConfig::default()
        };
        let (oracle, _) = kappa_lower_bound(&z, &oracle_cfg).unwrap();
        assert!(kappa > 0.0 && kappa <= oracle + 1e-9, "{kappa} vs {oracle}");
        // ρ(Z, j) <= min_i |z_j − z_i|, for the search and the grid alike
        for (j, c) in certs.iter().enumerate() {
            let nearest = z
                .differences(j)
                .iter()
                .map(|d| norm2(d))
                .fold(f64::INFINITY, f64::min);
            assert!(c.delta <= nearest + 1e-12);
            assert!(crate::oracle::grid_rho(&z, j, 100_000).unwrap() <= nearest + 1e-12);
        }
    }

    #[test]
    fn stale_certificates_are_caught() {
        let z = set(1, &[&[-0.5], &[0.5]]);
        let mut c = projection_separation(&z, 0, &SearchConfig::default()).unwrap();
        assert!(c.verify(&z).is_ok());
        c.delta += 1e-6;
        assert!(matches!(c.verify(&z), Err(Error::StaleCertificate { .. })));
    }

    proptest! {
        #[test]
        fn certificates_are_self_consistent_and_positive(seed in 0u64..1000, s in 2usize..7, n in 1usize..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let z = crate::sampling::random_nodeset(&mut rng, s, n);
            let cfg = SearchConfig { random_directions: 64, ..SearchConfig::default() };
            for j in 0..s {
                let c = projection_separation(&z, j, &cfg).unwrap();
                prop_assert!(c.delta > 0.0);
                prop_assert!((norm2(&c.direction) - 1.0).abs() <= 1e-12);
                prop_assert!((c.recompute(&z) - c.delta).abs() <= 1e-12);
                if s == 2 {
                    let d = norm2(&z.differences(j)[0]);
                    prop_assert!((c.delta - d).abs() <= 1e-12);
                }
            }
        }
    }
}
