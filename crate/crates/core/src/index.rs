//! Exponent tuples, their canonical ordering and multinomial weights.
//!
//! The canonical order on exponent vectors of a fixed degree is descending
//! lexicographic: for n = 3, m = 3 it reads 300, 210, 201, 120, 111, 102, 030,
//! 021, 012, 003. Every coefficient vector and Gram basis in the crate uses it.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An exponent vector `(α_0, …, α_{n-1})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Number of variables.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&a| a as usize).sum()
    }

    /// Componentwise sum, used to match Gram positions `(β, γ)` with `α = β + γ`.
    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.len(), other.len());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// The monomial `x^α`.
    pub fn monomial(&self, x: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(x)
            .map(|(&a, &xi)| if a == 0 { 1.0 } else { xi.powi(a as i32) })
            .product()
    }

    /// Position of this index among all indices of the same degree and length,
    /// in canonical order.
    pub fn rank(&self) -> usize {
        let n = self.len();
        let mut remaining = self.degree();
        let mut pos = 0;
        for (i, &a) in self.0.iter().enumerate() {
            let a = a as usize;
            let tail_vars = n - i - 1;
            // every tuple with a larger entry here precedes us
            for larger in (a + 1)..=remaining {
                pos += count_indices(remaining - larger, tail_vars);
            }
            remaining -= a;
        }
        pos
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&a| a < 10) {
            for a in &self.0 {
                write!(f, "{a}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
            write!(f, "({})", parts.join(","))
        }
    }
}

/// Number of exponent vectors of `vars` entries summing to `degree`, i.e. `C(degree+vars-1, vars-1)`.
pub fn count_indices(degree: usize, vars: usize) -> usize {
    if vars == 0 {
        return usize::from(degree == 0);
    }
    binomial(degree + vars - 1, vars - 1)
        .and_then(|c| usize::try_from(c).ok())
        .expect("index count overflows usize")
}

/// All exponent vectors of length `n` and degree `m`, in canonical order.
///
/// Returns an empty list when `n == 0`.
pub fn enumerate_indices(m: usize, n: usize) -> Vec<MultiIndex> {
    let mut out = Vec::with_capacity(if n == 0 { 0 } else { count_indices(m, n) });
    if n == 0 {
        return out;
    }
    let mut current = vec![0u32; n];
    fill(&mut current, 0, m, &mut out);
    out
}

fn fill(current: &mut [u32], pos: usize, remaining: usize, out: &mut Vec<MultiIndex>) {
    if pos + 1 == current.len() {
        current[pos] = remaining as u32;
        out.push(MultiIndex(current.to_vec()));
        return;
    }
    for a in (0..=remaining).rev() {
        current[pos] = a as u32;
        fill(current, pos + 1, remaining - a, out);
    }
    current[pos] = 0;
}

/// Exact binomial coefficient, `None` on overflow.
pub fn binomial(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// The multinomial coefficient `m! / (α_0! ⋯ α_{n-1}!)`, computed as a product of binomials.
pub fn multinomial(alpha: &MultiIndex) -> Result<u128> {
    let mut remaining = alpha.degree();
    let mut acc: u128 = 1;
    for &a in alpha.exponents() {
        let b = binomial(remaining, a as usize).ok_or_else(|| Error::Overflow(alpha.to_string()))?;
        acc = acc
            .checked_mul(b)
            .ok_or_else(|| Error::Overflow(alpha.to_string()))?;
        remaining -= a as usize;
    }
    Ok(acc)
}

/// Multinomial weights `c_α` as floats for every index of degree `m` in `n` variables.
pub fn weights(m: usize, n: usize) -> Result<Vec<f64>> {
    enumerate_indices(m, n)
        .iter()
        .map(|a| multinomial(a).map(|c| c as f64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(e: &[u32]) -> MultiIndex {
        MultiIndex::new(e.to_vec())
    }

    #[test]
    fn counts_for_small_shapes() {
        assert_eq!(enumerate_indices(6, 3).len(), 28);
        assert_eq!(enumerate_indices(3, 3).len(), 10);
        assert_eq!(enumerate_indices(0, 4), vec![mi(&[0, 0, 0, 0])]);
    }

    #[test]
    fn canonical_order_for_cubics() {
        let names: Vec<String> = enumerate_indices(3, 3).iter().map(|a| a.to_string()).collect();
        assert_eq!(
            names,
            ["300", "210", "201", "120", "111", "102", "030", "021", "012", "003"]
        );
    }

    #[test]
    fn rank_inverts_enumeration() {
        for n in 1..=4 {
            for m in 0..=8 {
                for (i, a) in enumerate_indices(m, n).iter().enumerate() {
                    assert_eq!(a.rank(), i, "m={m} n={n} alpha={a}");
                }
            }
        }
    }

    #[test]
    fn enumeration_counts_and_uniqueness() {
        for n in 1..=4 {
            for m in 0..=8 {
                let list = enumerate_indices(m, n);
                assert_eq!(list.len() as u128, binomial(n + m - 1, m).unwrap());
                let mut sorted = list.clone();
                sorted.sort();
                sorted.dedup();
                assert_eq!(sorted.len(), list.len());
                assert!(list.iter().all(|a| a.degree() == m && a.len() == n));
            }
        }
    }

    #[test]
    fn multinomial_examples() {
        assert_eq!(multinomial(&mi(&[6, 0, 0])).unwrap(), 1);
        assert_eq!(multinomial(&mi(&[3, 2, 1])).unwrap(), 60);
        assert_eq!(multinomial(&mi(&[5, 1, 0])).unwrap(), 6);
        assert_eq!(multinomial(&mi(&[0, 0, 6])).unwrap(), 1);
    }

    #[test]
    fn multinomial_theorem() {
        for n in 1..=4usize {
            for m in 0..=8usize {
                let total: u128 = enumerate_indices(m, n)
                    .iter()
                    .map(|a| multinomial(a).unwrap())
                    .sum();
                assert_eq!(total, (n as u128).pow(m as u32));
            }
        }
    }

    #[test]
    fn multinomial_overflow_is_reported() {
        let huge = mi(&[100, 100, 100, 100]);
        assert!(matches!(multinomial(&huge), Err(Error::Overflow(_))));
    }

    #[test]
    fn display_falls_back_for_large_exponents() {
        assert_eq!(mi(&[12, 0]).to_string(), "(12,0)");
    }
}
