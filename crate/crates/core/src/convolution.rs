//! Vector convolution, convolution powers and the convolution-side Hankel form.

use serde::{Deserialize, Serialize};

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, SymMatrix};
use crate::tensor::GeneratingVector;

/// `z_i = Σ_{i1+i2=i} x_{i1} y_{i2}`: the coefficients of the product of two polynomials.
pub fn convolve(x: &[f64], y: &[f64]) -> Vec<f64> {
    if x.is_empty() || y.is_empty() {
        return Vec::new();
    }
    let mut z = vec![0.0; x.len() + y.len() - 1];
    for (i, &a) in x.iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        for (j, &b) in y.iter().enumerate() {
            z[i + j] += a * b;
        }
    }
    z
}

/// `x^{*m}`, the m-fold convolution of `x` with itself (length `(n-1)m+1`).
///
/// `m = 0` yields the unit `[1]`.
pub fn conv_power(x: &[f64], m: usize) -> Vec<f64> {
    // square-and-multiply keeps the number of convolutions at O(log m)
    let mut result = vec![1.0];
    let mut base = x.to_vec();
    let mut e = m;
    while e > 0 {
        if e & 1 == 1 {
            result = convolve(&result, &base);
        }
        e >>= 1;
        if e > 0 {
            base = convolve(&base, &base);
        }
    }
    result
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// The Hankel form `v • x^{*m}`.
pub fn hankel_form(gv: &GeneratingVector, x: &[f64]) -> Result<f64> {
    if x.len() != gv.n() {
        return Err(Error::DimensionMismatch {
            expected: gv.n(),
            actual: x.len(),
        });
    }
    Ok(dot(gv.values(), &conv_power(x, gv.m())))
}

/// `(1, t, …, t^{len-1})`.
pub fn power_vector(t: f64, len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let mut p = 1.0;
    for _ in 0..len {
        out.push(p);
        p *= t;
    }
    out
}

/// A constant `c` with `c ‖Σ_j (x^j)^{*m}‖ ≥ max_j ‖x^j‖^m`, built from distinct evaluation points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaConstant {
    pub m: usize,
    pub n: usize,
    pub points: Vec<f64>,
    /// `c_k = ‖(1, t_k, …, t_k^{(n-1)m})‖`.
    pub point_norms: Vec<f64>,
    /// Largest singular value of `T^{-1}`, where row `k` of `T` is `(1, t_k, …, t_k^{n-1})`.
    pub inverse_norm: f64,
    /// `‖T^{-1}‖^m Σ_k c_k`.
    pub constant: f64,
    /// `n^{m/2-1} · constant`; also accounts for the 2-norm versus m-norm
    /// comparison `‖w‖_2 ≤ n^{1/2-1/m} ‖w‖_m`.
    pub rigorous_constant: f64,
}

/// Builds the constant from `points` (defaults to `t_k = k`).
pub fn lemma_constant(
    n: usize,
    m: usize,
    points: Option<&[f64]>,
    config: &SolverConfig,
) -> Result<LemmaConstant> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    if m == 0 || m % 2 == 1 {
        return Err(Error::OddOrder(m));
    }
    let points: Vec<f64> = match points {
        Some(p) => p.to_vec(),
        None => (0..n).map(|k| k as f64).collect(),
    };
    if points.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: points.len(),
        });
    }
    linalg::check_distinct(&points)?;

    let long_len = (n - 1) * m + 1;
    let point_norms: Vec<f64> = points.iter().map(|&t| norm(&power_vector(t, long_len))).collect();

    let t_matrix = Matrix::from_fn(n, n, |k, j| points[k].powi(j as i32));
    let t_inv = linalg::inverse(&t_matrix, config.pivot_tol)?;
    // ‖T^{-1}‖² = λ_max(T^{-1} T^{-T})
    let gram = SymMatrix::from_fn(n, |i, j| (0..n).map(|l| t_inv.get(i, l) * t_inv.get(j, l)).sum());
    let eig = linalg::eigh_with(&gram, config.eig_tol, config.eig_max_sweeps)?;
    let inverse_norm = eig.max().max(0.0).sqrt();

    let constant = inverse_norm.powi(m as i32) * point_norms.iter().sum::<f64>();
    let rigorous_constant = constant * (n as f64).powi(m as i32 / 2 - 1);
    Ok(LemmaConstant {
        m,
        n,
        points,
        point_norms,
        inverse_norm,
        constant,
        rigorous_constant,
    })
}

/// `c ‖Σ_j (x^j)^{*m}‖ − max_j ‖x^j‖^m`; non-negative whenever the inequality holds.
pub fn lemma_slack(constant: f64, m: usize, xs: &[Vec<f64>]) -> f64 {
    let Some(first) = xs.first() else {
        return 0.0;
    };
    let mut sum = vec![0.0; (first.len().max(1) - 1) * m + 1];
    let mut worst: f64 = 0.0;
    for x in xs {
        for (s, c) in sum.iter_mut().zip(conv_power(x, m)) {
            *s += c;
        }
        worst = worst.max(norm(x).powi(m as i32));
    }
    constant * norm(&sum) - worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convolve_examples() {
        assert_eq!(convolve(&[1.0, 1.0], &[1.0, 1.0]), vec![1.0, 2.0, 1.0]);
        assert_eq!(convolve(&[1.0, 2.0], &[3.0, 4.0]), vec![3.0, 10.0, 8.0]);
        assert_eq!(
            convolve(&[1.0, 0.0, 0.0], &[2.0, -1.0]),
            vec![2.0, -1.0, 0.0, 0.0]
        );
        assert!(convolve(&[], &[1.0]).is_empty());
    }

    #[test]
    fn conv_power_examples() {
        assert_eq!(conv_power(&[1.0, 1.0], 4), vec![1.0, 4.0, 6.0, 4.0, 1.0]);
        assert_eq!(
            conv_power(&[2.0, 0.0, 0.0], 3),
            vec![8.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
        );
        assert_eq!(conv_power(&[0.0, 1.0], 3), vec![0.0, 0.0, 0.0, 1.0]);
        assert_eq!(conv_power(&[0.3, 0.2, 0.1], 5).len(), 11);
        assert_eq!(conv_power(&[5.0, 1.0], 0), vec![1.0]);
    }

    #[test]
    fn conv_power_matches_repeated_convolution() {
        let x = [0.5, -1.25, 2.0];
        let mut acc = vec![1.0];
        for m in 1..=7 {
            acc = convolve(&acc, &x);
            let fast = conv_power(&x, m);
            for (a, b) in acc.iter().zip(&fast) {
                assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
            }
        }
    }

    #[test]
    fn hankel_form_examples() {
        let gv = GeneratingVector::new(2, 2, vec![1.0, 0.0, 1.0]).unwrap();
        assert_eq!(hankel_form(&gv, &[3.0, 4.0]).unwrap(), 25.0);

        let gv = GeneratingVector::new(4, 3, (0..9).map(|i| (i as f64).sin()).collect()).unwrap();
        assert_eq!(hankel_form(&gv, &[1.0, 0.0, 0.0]).unwrap(), gv.values()[0]);
        assert!(hankel_form(&gv, &[1.0, 0.0]).is_err());

        // v = (1, t, …, t^{(n-1)m}) gives (x • (1, t, …, t^{n-1}))^m
        let t = 0.7;
        let gv = GeneratingVector::new(4, 3, power_vector(t, 9)).unwrap();
        let x = [0.3, -1.1, 0.4];
        let expected = dot(&x, &power_vector(t, 3)).powi(4);
        let got = hankel_form(&gv, &x).unwrap();
        assert!((got - expected).abs() <= 1e-12 * expected.abs().max(1.0));
    }

    #[test]
    fn lemma_constant_two_points() {
        let lc = lemma_constant(2, 2, Some(&[0.0, 1.0]), &SolverConfig::default()).unwrap();
        assert!((lc.point_norms[0] - 1.0).abs() < 1e-15);
        assert!((lc.point_norms[1] - 3f64.sqrt()).abs() < 1e-15);
        // T = [[1,0],[1,1]], ‖T^{-1}‖² = (3+√5)/2
        let expected_sq = (3.0 + 5f64.sqrt()) / 2.0;
        assert!((lc.inverse_norm.powi(2) - expected_sq).abs() < 1e-12);
        assert!((lc.constant - expected_sq * (1.0 + 3f64.sqrt())).abs() < 1e-11);
        // x = e_0, y = e_1 requires c ≥ 1/√2
        assert!(lc.constant >= 1.0 / 2f64.sqrt());
        let slack = lemma_slack(lc.constant, 2, &[vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert!((slack - (lc.constant * 2f64.sqrt() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn lemma_constant_degenerate_dimension() {
        let lc = lemma_constant(1, 4, None, &SolverConfig::default()).unwrap();
        assert_eq!(lc.constant, 1.0);
        let slack = lemma_slack(lc.constant, 4, &[vec![-1.7]]);
        assert!(slack.abs() < 1e-12);
    }

    #[test]
    fn lemma_constant_rejects_bad_input() {
        let cfg = SolverConfig::default();
        assert!(matches!(
            lemma_constant(2, 2, Some(&[1.0, 1.0]), &cfg),
            Err(Error::DuplicateNodes { .. })
        ));
        assert!(matches!(
            lemma_constant(2, 3, None, &cfg),
            Err(Error::OddOrder(3))
        ));
        assert!(lemma_constant(3, 2, Some(&[0.0, 1.0]), &cfg).is_err());
    }
}
