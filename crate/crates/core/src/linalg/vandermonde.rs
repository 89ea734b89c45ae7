//! Björck–Pereyra solvers for square Vandermonde systems.
//!
//! `U` denotes the matrix with `U[j][k] = u_k^j`, i.e. column `k` is
//! `(1, u_k, …, u_k^{N-1})`. Both solvers run in O(N²) and use progressive
//! elimination instead of a generic LU factorization.

use super::check_distinct;
use crate::error::{Error, Result};

fn check(nodes: &[f64], rhs: &[f64]) -> Result<()> {
    if nodes.len() != rhs.len() {
        return Err(Error::DimensionMismatch {
            expected: nodes.len(),
            actual: rhs.len(),
        });
    }
    check_distinct(nodes)
}

/// Solves `U z = b` (the moment system `Σ_k z_k u_k^j = b_j`).
pub fn vandermonde_solve(nodes: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    check(nodes, b)?;
    let mut z = b.to_vec();
    if z.is_empty() {
        return Ok(z);
    }
    let n = z.len() - 1;
    for (k, &u) in nodes.iter().enumerate().take(n) {
        for i in ((k + 1)..=n).rev() {
            z[i] -= u * z[i - 1];
        }
    }
    for k in (0..n).rev() {
        for i in (k + 1)..=n {
            z[i] /= nodes[i] - nodes[i - k - 1];
        }
        for i in k..n {
            z[i] -= z[i + 1];
        }
    }
    Ok(z)
}

/// Solves `Uᵀ a = f` (polynomial interpolation `Σ_j a_j u_k^j = f_k`).
pub fn vandermonde_transpose_solve(nodes: &[f64], f: &[f64]) -> Result<Vec<f64>> {
    check(nodes, f)?;
    let mut a = f.to_vec();
    if a.is_empty() {
        return Ok(a);
    }
    let n = a.len() - 1;
    // Newton divided differences
    for k in 0..n {
        for i in ((k + 1)..=n).rev() {
            a[i] = (a[i] - a[i - 1]) / (nodes[i] - nodes[i - k - 1]);
        }
    }
    // Newton form to monomial coefficients
    for k in (0..n).rev() {
        for i in k..n {
            a[i] -= nodes[k] * a[i + 1];
        }
    }
    Ok(a)
}
