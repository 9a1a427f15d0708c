//! Multi-indices and the graded monomial order.
//!
//! Every coefficient vector and every Vandermonde column in the crate is
//! indexed by [`MonomialOrder`]: monomials are sorted by total degree, and
//! within a degree lexicographically with the first coordinate most
//! significant and larger exponents first, so for two variables the order is
//! `1, x, y, x², xy, y², ...`.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Largest value any exact combinatorial routine may return.
const LIMIT: u128 = 1 << 63;

/// Exponent vector `(α_1, ..., α_n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Total degree `|α|`.
    pub fn degree(&self) -> usize {
        self.0.iter().map(|&a| a as usize).sum()
    }

    /// `z^α`, with each coordinate power computed by repeated squaring.
    pub fn eval(&self, z: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(z)
            .map(|(&a, &x)| x.powi(a as i32))
            .product()
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

/// Binomial coefficient `C(n, k)`, exact, failing instead of overflowing.
pub fn binomial(n: u64, k: u64) -> Result<u64> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc = C(n, i) here, so the division is exact
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc >= LIMIT {
            return Err(Error::Overflow(format!("C({n}, {k})")));
        }
    }
    Ok(acc as u64)
}

/// `ν(n, N) = C(N + n, N)`, the number of monomials of degree at most `N` in
/// `n` variables.
pub fn dimension(n: usize, degree: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::Contract(
            "ambient dimension must be at least 1".into(),
        ));
    }
    let total = (n as u64)
        .checked_add(degree as u64)
        .ok_or_else(|| Error::Overflow(format!("nu({n}, {degree})")))?;
    let nu = binomial(total, degree as u64)?;
    usize::try_from(nu).map_err(|_| Error::Overflow(format!("nu({n}, {degree})")))
}

/// Multinomial coefficient `k! / (α_1! ⋯ α_n!)`.
pub fn multinomial(k: usize, alpha: &MultiIndex) -> Result<u64> {
    if alpha.degree() != k {
        return Err(Error::Contract(format!(
            "multinomial needs |alpha| = k, got |alpha| = {} and k = {k}",
            alpha.degree()
        )));
    }
    let mut remaining = k as u64;
    let mut acc: u128 = 1;
    for &a in alpha.exponents() {
        acc *= binomial(remaining, a as u64)? as u128;
        if acc >= LIMIT {
            return Err(Error::Overflow(format!("multinomial({k}; {alpha:?})")));
        }
        remaining -= a as u64;
    }
    Ok(acc as u64)
}

/// All multi-indices of total degree at most `degree`, in graded order.
pub fn enumerate(n: usize, degree: usize) -> Result<Vec<MultiIndex>> {
    let nu = dimension(n, degree)?;
    let mut out = Vec::with_capacity(nu);
    let mut scratch = vec![0u32; n];
    for d in 0..=degree {
        push_exact_degree(&mut scratch, 0, d as u32, &mut out);
    }
    debug_assert_eq!(out.len(), nu);
    Ok(out)
}

fn push_exact_degree(scratch: &mut [u32], pos: usize, left: u32, out: &mut Vec<MultiIndex>) {
    if pos + 1 == scratch.len() {
        scratch[pos] = left;
        out.push(MultiIndex(scratch.to_vec()));
        return;
    }
    for a in (0..=left).rev() {
        scratch[pos] = a;
        push_exact_degree(scratch, pos + 1, left - a, out);
    }
}

/// The fixed bijection between multi-indices of degree `<= N` and column
/// positions `0..ν`.
#[derive(Debug, Clone)]
pub struct MonomialOrder {
    n: usize,
    degree: usize,
    indices: Vec<MultiIndex>,
    lookup: HashMap<MultiIndex, usize>,
}

impl MonomialOrder {
    pub fn new(n: usize, degree: usize) -> Result<Self> {
        let indices = enumerate(n, degree)?;
        let lookup = indices
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i))
            .collect();
        Ok(MonomialOrder {
            n,
            degree,
            indices,
            lookup,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `ν(n, N)`.
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn get(&self, i: usize) -> Option<&MultiIndex> {
        self.indices.get(i)
    }

    pub fn index_of(&self, alpha: &MultiIndex) -> Option<usize> {
        self.lookup.get(alpha).copied()
    }

    /// Evaluates every monomial at `z`, i.e. one Vandermonde row.
    pub fn monomials_at(&self, z: &[f64]) -> Vec<f64> {
        let table = power_table(z, self.degree);
        self.indices
            .iter()
            .map(|alpha| {
                alpha
                    .exponents()
                    .iter()
                    .enumerate()
                    .map(|(l, &a)| table[l][a as usize])
                    .product()
            })
            .collect()
    }
}

/// `table[l][k] = z_l^k` for `k <= degree`, each entry by `powi`.
pub(crate) fn power_table(z: &[f64], degree: usize) -> Vec<Vec<f64>> {
    z.iter()
        .map(|&x| (0..=degree).map(|k| x.powi(k as i32)).collect())
        .collect()
}
