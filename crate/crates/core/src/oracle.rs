//! Independent verifiers: exact rational Lagrange and Vandermonde pipelines,
//! and a dense direction grid for `ρ`. Slow by design; not used on the
//! certification path.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    achieved_gap, exact_rho_planar, projection_separation, NodeSet, SearchConfig,
};
use crate::linalg::distance_to_span;
use crate::multiindex::{multinomial, MonomialOrder};
use crate::multivariate::lagrange_polynomial;
use crate::univariate::{lagrange_basis_coeffs, UnivariateNodes};
use crate::vandermonde::build;

pub type Rational = BigRational;

/// The exact value of a finite double.
pub fn to_rational(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| Error::Contract(format!("{x} is not finite")))
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Horner evaluation of `Σ c_k x^k`.
pub fn eval_exact(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs
        .iter()
        .rev()
        .fold(Rational::zero(), |acc, c| acc * x + c)
}

/// Coefficients of `Π_{i≠j}(t − t_i) / Π_{i≠j}(t_j − t_i)`, lowest degree
/// first, by repeated multiplication with linear factors.
pub fn exact_lagrange_univariate(t: &[Rational], j: usize) -> Result<Vec<Rational>> {
    if j >= t.len() {
        return Err(Error::IndexOutOfRange {
            index: j,
            count: t.len(),
        });
    }
    let mut poly = vec![Rational::one()];
    let mut denom = Rational::one();
    for (i, ti) in t.iter().enumerate() {
        if i == j {
            continue;
        }
        let gap = &t[j] - ti;
        if gap.is_zero() {
            return Err(Error::InvalidNodeSet(format!("nodes {i} and {j} coincide")));
        }
        denom *= gap;
        let mut next = vec![Rational::zero(); poly.len() + 1];
        for (k, c) in poly.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * ti;
        }
        poly = next;
    }
    Ok(poly.into_iter().map(|c| c / &denom).collect())
}

fn exact_power(z: &[Rational], exponents: &[u32]) -> Rational {
    exponents
        .iter()
        .zip(z)
        .fold(Rational::one(), |acc, (&e, x)| {
            acc * num_traits::pow(x.clone(), e as usize)
        })
}

/// Row `z^α` over the basis of `order`.
pub fn exact_monomials(z: &[Rational], order: &MonomialOrder) -> Vec<Rational> {
    order
        .indices()
        .iter()
        .map(|alpha| exact_power(z, alpha.exponents()))
        .collect()
}

pub fn exact_vandermonde(z: &[Vec<Rational>], order: &MonomialOrder) -> Vec<Vec<Rational>> {
    z.iter().map(|p| exact_monomials(p, order)).collect()
}

/// A solution of `A x = b` with free variables set to zero, and `rank(A)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactSolution {
    pub x: Vec<Rational>,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
    row.iter().map(|q| q.numer() * (&lcm / q.denom())).collect()
}

/// Fraction-free echelon form. Returns the pivot columns among the first
/// `active` columns.
fn bareiss(m: &mut [Vec<BigInt>], active: usize) -> Vec<usize> {
    let rows = m.len();
    let width = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..active {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let (top, rest) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest.iter_mut() {
            let lead = row[col].clone();
            for k in col + 1..width {
                let num = &pivot_row[col] * &row[k] - &lead * &pivot_row[k];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "inexact Bareiss division");
                row[k] = q;
            }
            row[col] = BigInt::zero();
        }
        prev = pivot_row[col].clone();
        pivots.push(col);
        r += 1;
    }
    pivots
}

/// Exact rank of a rational matrix.
pub fn exact_rank(a: &[Vec<Rational>]) -> usize {
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<BigInt>> = a.iter().map(|r| integer_row(r)).collect();
    bareiss(&mut m, cols).len()
}

/// Solves `A x = b` exactly. `Ok(None)` when the system is inconsistent.
pub fn solve_exact(a: &[Vec<Rational>], b: &[Rational]) -> Result<Option<ExactSolution>> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut aug = row.clone();
            aug.push(bi.clone());
            integer_row(&aug)
        })
        .collect();
    let pivots = bareiss(&mut m, cols);
    let rank = pivots.len();
    if m[rank..].iter().any(|row| !row[cols].is_zero()) {
        return Ok(None);
    }
    let mut x = vec![Rational::zero(); cols];
    for (k, &pc) in pivots.iter().enumerate().rev() {
        let row = &m[k];
        let mut acc = Rational::from_integer(row[cols].clone());
        for &qc in &pivots[k + 1..] {
            acc -= Rational::from_integer(row[qc].clone()) * &x[qc];
        }
        x[pc] = acc / Rational::from_integer(row[pc].clone());
    }
    Ok(Some(ExactSolution { x, rank, pivots }))
}

/// Exact `c` with `V_N(Z) c = e_j`, supported on pivot monomials of the
/// graded order. Fails unless `V_N(Z)` has full row rank.
pub fn exact_vandermonde_solve(
    z: &[Vec<Rational>],
    degree: usize,
    j: usize,
) -> Result<ExactSolution> {
    let s = z.len();
    if j >= s {
        return Err(Error::IndexOutOfRange { index: j, count: s });
    }
    if degree + 1 < s {
        return Err(Error::DegreeTooLow {
            degree,
            required: s - 1,
        });
    }
    let n = z[0].len();
    let order = MonomialOrder::new(n, degree)?;
    let v = exact_vandermonde(z, &order);
    let e: Vec<Rational> = (0..s)
        .map(|i| {
            if i == j {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
        .collect();
    match solve_exact(&v, &e)? {
        Some(sol) if sol.rank == s => Ok(sol),
        Some(sol) => Err(Error::Contract(format!(
            "exact rank {} below s = {s}",
            sol.rank
        ))),
        None => Err(Error::Contract("V c = e_j has no exact solution".into())),
    }
}

/// Exact coefficients of `Q_j(z) = p_j(<v, z>)` for a rational direction `v`.
pub fn exact_lagrange_multivariate(
    z: &[Vec<Rational>],
    degree: usize,
    j: usize,
    v: &[Rational],
) -> Result<Vec<Rational>> {
    let n = v.len();
    if let Some(bad) = z.iter().find(|p| p.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: bad.len(),
        });
    }
    let t: Vec<Rational> = z
        .iter()
        .map(|p| {
            p.iter()
                .zip(v)
                .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
        })
        .collect();
    let p = exact_lagrange_univariate(&t, j)?;
    if p.len() > degree + 1 {
        return Err(Error::DegreeTooLow {
            degree,
            required: p.len() - 1,
        });
    }
    let order = MonomialOrder::new(n, degree)?;
    order
        .indices()
        .iter()
        .map(|alpha| {
            let k = alpha.degree();
            let Some(a) = p.get(k) else {
                return Ok(Rational::zero());
            };
            let mult = Rational::from_integer(BigInt::from(multinomial(k, alpha)?));
            Ok(a * mult * exact_power(v, alpha.exponents()))
        })
        .collect()
}

/// `dist(x, span(rows))²` from the exact Gram normal equations.
pub fn exact_distance_squared(x: &[Rational], rows: &[Vec<Rational>]) -> Result<Rational> {
    let dot = |a: &[Rational], b: &[Rational]| {
        a.iter()
            .zip(b)
            .fold(Rational::zero(), |acc, (p, q)| acc + p * q)
    };
    let xx = dot(x, x);
    if rows.is_empty() {
        return Ok(xx);
    }
    let gram: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| rows.iter().map(|c| dot(r, c)).collect())
        .collect();
    let b: Vec<Rational> = rows.iter().map(|r| dot(r, x)).collect();
    let sol = solve_exact(&gram, &b)?
        .ok_or_else(|| Error::Contract("Gram normal equations are inconsistent".into()))?;
    Ok(xx - dot(&b, &sol.x))
}

/// Largest `min_{i≠j} |<v, z_j − z_i>|` over a quasi-uniform direction grid:
/// equispaced angles on a half circle for `n = 2`, a Fibonacci sphere for
/// `n = 3`. For `n = 1` it is the exact minimal gap.
pub fn grid_rho(nodes: &NodeSet, j: usize, resolution: usize) -> Result<f64> {
    nodes.check_index(j)?;
    if resolution < 1000 {
        return Err(Error::Contract(format!(
            "grid resolution {resolution} below 1000"
        )));
    }
    let best = |dirs: &mut dyn Iterator<Item = Vec<f64>>| {
        dirs.map(|v| achieved_gap(nodes, j, &v))
            .fold(f64::NEG_INFINITY, f64::max)
    };
    match nodes.dim() {
        1 => Ok(achieved_gap(nodes, j, &[1.0])),
        2 => Ok(best(&mut (0..resolution).map(|k| {
            let th = std::f64::consts::PI * k as f64 / resolution as f64;
            vec![th.cos(), th.sin()]
        }))),
        3 => {
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            Ok(best(&mut (0..resolution).map(|k| {
                let y = 1.0 - 2.0 * (k as f64 + 0.5) / resolution as f64;
                let r = (1.0 - y * y).sqrt();
                let phi = golden * k as f64;
                vec![r * phi.cos(), y, r * phi.sin()]
            })))
        }
        n => Err(Error::Contract(format!(
            "grid search supports n in 1..=3, got {n}"
        ))),
    }
}

/// A random node set with coordinates `p/q`, `1 <= q <= max_den`, inside the
/// closed unit ball, together with its floating image.
pub fn random_rational_nodeset<R: Rng>(
    rng: &mut R,
    s: usize,
    n: usize,
    max_den: i64,
) -> (Vec<Vec<Rational>>, NodeSet) {
    loop {
        let mut pts: Vec<Vec<Rational>> = Vec::with_capacity(s);
        while pts.len() < s {
            let p: Vec<Rational> = (0..n)
                .map(|_| {
                    let q = rng.gen_range(1..=max_den);
                    ratio(rng.gen_range(-q..=q), q)
                })
                .collect();
            let r2 = p.iter().fold(Rational::zero(), |acc, x| acc + x * x);
            if r2 <= Rational::one() && !pts.contains(&p) {
                pts.push(p);
            }
        }
        let floats = pts.iter().map(|p| p.iter().map(to_f64).collect()).collect();
        if let Ok(set) = NodeSet::new(n, floats) {
            return (pts, set);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleCheckConfig {
    pub seed: u64,
    pub rational_instances: usize,
    pub planar_instances: usize,
    pub grid_resolution: usize,
    pub max_denominator: i64,
}

impl Default for OracleCheckConfig {
    fn default() -> Self {
        OracleCheckConfig {
            seed: 0,
            rational_instances: 200,
            planar_instances: 100,
            grid_resolution: 1_000_000,
            max_denominator: 64,
        }
    }
}

/// Tolerances of the oracle comparisons.
pub const COEFFICIENT_RELATIVE_TOLERANCE: f64 = 1e-12;
pub const PLANAR_GRID_TOLERANCE: f64 = 1e-4;
pub const DISTANCE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleCheckSummary {
    pub rational_instances: usize,
    pub univariate_max_rel_error: f64,
    pub multivariate_max_rel_error: f64,
    pub distance_max_abs_error: f64,
    pub rank_failures: usize,
    pub exact_residual_failures: usize,
    pub planar_instances: usize,
    pub planar_max_abs_diff: f64,
    pub passed: bool,
}

/// `max_k |float_k − exact_k| / max_k |exact_k|`.
pub fn relative_error(float: &[f64], exact: &[Rational]) -> f64 {
    let scale = exact.iter().map(|q| to_f64(q).abs()).fold(0.0, f64::max);
    let err = float
        .iter()
        .zip(exact)
        .map(|(f, q)| {
            // subtract in exact arithmetic so only the final rounding remains
            let d = to_rational(*f).map(|fq| fq - q).map(|d| to_f64(&d.abs()));
            d.unwrap_or(f64::INFINITY)
        })
        .fold(0.0, f64::max);
    err / scale
}

/// Runs the rational and grid comparisons on seeded random instances.
pub fn oracle_check(config: &OracleCheckConfig) -> Result<OracleCheckSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let search = SearchConfig::default();
    let mut sum = OracleCheckSummary {
        rational_instances: config.rational_instances,
        univariate_max_rel_error: 0.0,
        multivariate_max_rel_error: 0.0,
        distance_max_abs_error: 0.0,
        rank_failures: 0,
        exact_residual_failures: 0,
        planar_instances: config.planar_instances,
        planar_max_abs_diff: 0.0,
        passed: false,
    };
    for _ in 0..config.rational_instances {
        let s = rng.gen_range(2..=5);
        let n = rng.gen_range(1..=3);
        let (zq, z) = random_rational_nodeset(&mut rng, s, n, config.max_denominator);
        let degree = s - 1;
        let sys = build(&z, degree)?;
        let order = MonomialOrder::new(n, degree)?;
        let vq = exact_vandermonde(&zq, &order);
        if exact_rank(&vq) != s {
            sum.rank_failures += 1;
        }
        if n == 1 {
            let tq: Vec<Rational> = zq.iter().map(|p| p[0].clone()).collect();
            let t = UnivariateNodes::new(z.points().iter().map(|p| p[0]).collect())?;
            for j in 0..s {
                let exact = exact_lagrange_univariate(&tq, j)?;
                let float = lagrange_basis_coeffs(&t, j)?;
                let e = relative_error(float.as_slice(), &exact);
                sum.univariate_max_rel_error = sum.univariate_max_rel_error.max(e);
            }
        }
        for j in 0..s {
            let cert = projection_separation(&z, j, &search)?;
            let q = lagrange_polynomial(&z, j, &cert, sys.order())?;
            let v: Vec<Rational> = cert
                .direction
                .iter()
                .map(|&x| to_rational(x))
                .collect::<Result<_>>()?;
            let exact = exact_lagrange_multivariate(&zq, degree, j, &v)?;
            let e = relative_error(q.coeffs().as_slice(), &exact);
            sum.multivariate_max_rel_error = sum.multivariate_max_rel_error.max(e);
            let kronecker = vq.iter().enumerate().all(|(i, row)| {
                let val = row
                    .iter()
                    .zip(&exact)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b);
                val == if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            });
            if !kronecker {
                sum.exact_residual_failures += 1;
            }

            let others: Vec<Vec<Rational>> =
                (0..s).filter(|&i| i != j).map(|i| vq[i].clone()).collect();
            let exact_dist = to_f64(&exact_distance_squared(&vq[j], &others)?).sqrt();
            let float_rows: Vec<Vec<f64>> = (0..s)
                .filter(|&i| i != j)
                .map(|i| sys.matrix().row(i).to_vec())
                .collect();
            let float_dist = distance_to_span(sys.matrix().row(j), &float_rows)?;
            sum.distance_max_abs_error = sum
                .distance_max_abs_error
                .max((float_dist - exact_dist).abs());
        }
    }
    for _ in 0..config.planar_instances {
        let s = rng.gen_range(2..=6);
        let z = crate::sampling::random_nodeset(&mut rng, s, 2);
        let j = rng.gen_range(0..s);
        let exact = exact_rho_planar(&z, j)?.delta;
        let grid = grid_rho(&z, j, config.grid_resolution)?;
        sum.planar_max_abs_diff = sum.planar_max_abs_diff.max((exact - grid).abs());
    }
    sum.passed = sum.rank_failures == 0
        && sum.exact_residual_failures == 0
        && sum.univariate_max_rel_error <= COEFFICIENT_RELATIVE_TOLERANCE
        && sum.multivariate_max_rel_error <= COEFFICIENT_RELATIVE_TOLERANCE
        && sum.distance_max_abs_error <= DISTANCE_TOLERANCE
        && sum.planar_max_abs_diff <= PLANAR_GRID_TOLERANCE;
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Rational {
        ratio(p, d)
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&p| q(p, 1)).collect()
    }

    #[test]
    fn univariate_examples() {
        assert_eq!(
            exact_lagrange_univariate(&ints(&[-1, 0, 1]), 1).unwrap(),
            ints(&[1, 0, -1])
        );
        assert_eq!(
            exact_lagrange_univariate(&[q(0, 1), q(1, 2)], 0).unwrap(),
            ints(&[1, -2])
        );
        // (t − 1/3)(t − 2/3) · 9/2
        let t = [q(0, 1), q(1, 3), q(2, 3)];
        let c = exact_lagrange_univariate(&t, 0).unwrap();
        assert_eq!(c, vec![q(1, 1), q(-9, 2), q(9, 2)]);
        let float = lagrange_basis_coeffs(
            &UnivariateNodes::new(vec![0.0, 1.0 / 3.0, 2.0 / 3.0]).unwrap(),
            0,
        )
        .unwrap();
        assert!(relative_error(float.as_slice(), &c) <= 1e-12);
        assert!(exact_lagrange_univariate(&[q(1, 2), q(1, 2)], 0).is_err());
    }

    #[test]
    fn univariate_is_kronecker() {
        let t = [q(-7, 8), q(-1, 5), q(1, 3), q(9, 10)];
        for j in 0..4 {
            let c = exact_lagrange_univariate(&t, j).unwrap();
            for (i, ti) in t.iter().enumerate() {
                let want = if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                };
                assert_eq!(eval_exact(&c, ti), want);
            }
        }
    }

    #[test]
    fn vandermonde_solve_examples() {
        let z = vec![vec![q(-1, 2)], vec![q(1, 2)]];
        let sol = exact_vandermonde_solve(&z, 1, 0).unwrap();
        assert_eq!(sol.x, vec![q(1, 2), q(-1, 1)]);
        assert_eq!(sol.rank, 2);

        let z = vec![ints(&[0, 0]), ints(&[1, 0])];
        assert_eq!(
            exact_vandermonde_solve(&z, 1, 0).unwrap().x,
            ints(&[1, -1, 0])
        );

        let collinear = vec![ints(&[0, 0]), vec![q(1, 2), q(0, 1)], ints(&[1, 0])];
        let order = MonomialOrder::new(2, 2).unwrap();
        assert_eq!(exact_rank(&exact_vandermonde(&collinear, &order)), 3);
        assert_eq!(exact_vandermonde_solve(&collinear, 2, 1).unwrap().rank, 3);
    }

    #[test]
    fn rank_deficiency_is_reported() {
        let a = vec![ints(&[1, 2]), ints(&[2, 4])];
        assert_eq!(exact_rank(&a), 1);
        assert!(solve_exact(&a, &ints(&[1, 0])).unwrap().is_none());
        let sol = solve_exact(&a, &ints(&[1, 2])).unwrap().unwrap();
        assert_eq!(sol.x, vec![q(1, 1), q(0, 1)]);
        let z = vec![vec![q(0, 1)], vec![q(1, 2)], vec![q(1, 1)]];
        assert!(matches!(
            exact_vandermonde_solve(&z, 1, 0),
            Err(Error::DegreeTooLow { .. })
        ));
    }

    #[test]
    fn multivariate_pipeline_matches_solve() {
        // with v = e_1 the construction is the univariate basis in x
        let z = vec![ints(&[0, 0]), ints(&[1, 0])];
        let c = exact_lagrange_multivariate(&z, 1, 0, &ints(&[1, 0])).unwrap();
        assert_eq!(c, exact_vandermonde_solve(&z, 1, 0).unwrap().x);
    }

    #[test]
    fn planar_triangle_against_float_construction() {
        let zq = vec![ints(&[0, 0]), ints(&[1, 0]), ints(&[0, 1])];
        let z = NodeSet::new(2, vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let cert = exact_rho_planar(&z, 0).unwrap();
        let sys = build(&z, 2).unwrap();
        let qf = lagrange_polynomial(&z, 0, &cert, sys.order()).unwrap();
        let v: Vec<Rational> = cert
            .direction
            .iter()
            .map(|&x| to_rational(x).unwrap())
            .collect();
        let exact = exact_lagrange_multivariate(&zq, 2, 0, &v).unwrap();
        assert!(relative_error(qf.coeffs().as_slice(), &exact) <= 1e-12);
    }

    #[test]
    fn exact_distance() {
        let x = ints(&[1, 1]);
        assert_eq!(
            exact_distance_squared(&x, &[ints(&[1, 0])]).unwrap(),
            q(1, 1)
        );
        assert_eq!(
            exact_distance_squared(&x, &[ints(&[1, 0]), ints(&[2, 0])]).unwrap(),
            q(1, 1)
        );
        // rows (1, −1/2), (1, 1/2) of the two-node matrix
        let d = exact_distance_squared(&[q(1, 1), q(-1, 2)], &[vec![q(1, 1), q(1, 2)]]).unwrap();
        assert_eq!(d, q(4, 5));
    }

    #[test]
    fn grid_examples() {
        let tri = NodeSet::new(2, vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let g = grid_rho(&tri, 0, 1_000_000).unwrap();
        assert!((g - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-4);

        let line = NodeSet::new(1, vec![vec![-0.5], vec![0.1], vec![0.2]]).unwrap();
        assert_eq!(
            grid_rho(&line, 1, 1000).unwrap(),
            achieved_gap(&line, 1, &[1.0])
        );

        let pair = NodeSet::new(3, vec![vec![0.1, 0.2, 0.3], vec![-0.4, 0.0, 0.5]]).unwrap();
        let dist = (0.25f64 + 0.04 + 0.04).sqrt();
        let coarse = dist - grid_rho(&pair, 0, 1000).unwrap();
        let fine = dist - grid_rho(&pair, 0, 100_000).unwrap();
        assert!(fine >= 0.0 && fine <= coarse && fine < 1e-4);

        assert!(grid_rho(&tri, 0, 10).is_err());
        let four = NodeSet::new(4, vec![vec![0.0; 4], vec![0.5, 0.0, 0.0, 0.0]]).unwrap();
        assert!(grid_rho(&four, 0, 1000).is_err());
    }

    #[test]
    fn small_oracle_check_passes() {
        let cfg = OracleCheckConfig {
            rational_instances: 20,
            planar_instances: 5,
            grid_resolution: 200_000,
            ..OracleCheckConfig::default()
        };
        let sum = oracle_check(&cfg).unwrap();
        assert!(
            sum.rank_failures == 0 && sum.exact_residual_failures == 0,
            "{sum:?}"
        );
        assert!(sum.distance_max_abs_error <= DISTANCE_TOLERANCE, "{sum:?}");
    }
}
