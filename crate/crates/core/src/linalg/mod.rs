//! Dense linear algebra at desk scale: symmetric eigenproblems, LU solves,
//! Vandermonde systems and PSD projection.

mod eigen;
mod lu;
mod vandermonde;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use eigen::{eigh, eigh_with, factorize_psd, project_psd, EigenDecomposition};
pub use lu::{determinant, inverse, least_squares, solve, solve_with, Lu};
pub use vandermonde::{vandermonde_solve, vandermonde_transpose_solve};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(d: usize) -> Self {
        Self::from_fn(d, d, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                actual: bad.len(),
            });
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                actual: x.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                actual: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(l, j);
                }
            }
        }
        Ok(out)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, x| acc.max(x.abs()))
    }
}

/// Dense symmetric matrix; the upper triangle is authoritative on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    d: usize,
    data: Vec<f64>,
}

/// Relative asymmetry accepted by [`SymMatrix::from_rows`].
pub const SYMMETRY_TOL: f64 = 1e-13;

impl SymMatrix {
    pub fn zeros(d: usize) -> Self {
        Self {
            d,
            data: vec![0.0; d * d],
        }
    }

    pub fn identity(d: usize) -> Self {
        Self::from_fn(d, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    /// Builds the matrix from `f(i, j)` evaluated on the upper triangle.
    pub fn from_fn(d: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut out = Self::zeros(d);
        for i in 0..d {
            for j in i..d {
                let v = f(i, j);
                out.data[i * d + j] = v;
                out.data[j * d + i] = v;
            }
        }
        out
    }

    /// Checks symmetry (asymmetry ≤ 1e-13 of the largest entry) and then copies
    /// the upper triangle onto the lower one.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = Matrix::from_rows(rows)?;
        Self::from_matrix(&m)
    }

    pub fn from_matrix(m: &Matrix) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(Error::DimensionMismatch {
                expected: m.rows(),
                actual: m.cols(),
            });
        }
        let d = m.rows();
        let scale = m.max_abs();
        let mut asym: f64 = 0.0;
        for i in 0..d {
            for j in (i + 1)..d {
                asym = asym.max((m.get(i, j) - m.get(j, i)).abs());
            }
        }
        let tolerance = SYMMETRY_TOL * scale;
        if asym > tolerance {
            return Err(Error::NotSymmetric {
                asymmetry: asym,
                tolerance,
            });
        }
        Ok(Self::from_fn(d, |i, j| m.get(i, j)))
    }

    /// `Σ_i c_i c_iᵀ`.
    pub fn from_outer_products(d: usize, factors: &[Vec<f64>]) -> Self {
        Self::from_fn(d, |i, j| factors.iter().map(|c| c[i] * c[j]).sum())
    }

    /// Wraps row-major storage that is already exactly symmetric.
    pub(crate) fn from_raw(d: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), d * d);
        Self { d, data }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.d + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.d + j] = value;
        self.data[j * self.d + i] = value;
    }

    #[inline]
    pub fn add_at(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.d + j] += value;
        if i != j {
            self.data[j * self.d + i] += value;
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix {
            rows: self.d,
            cols: self.d,
            data: self.data.clone(),
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.d.max(1)).map(<[f64]>::to_vec).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.d).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Frobenius inner product.
    pub fn inner(&self, other: &SymMatrix) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn scaled(&self, s: f64) -> SymMatrix {
        SymMatrix {
            d: self.d,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn sub(&self, other: &SymMatrix) -> SymMatrix {
        SymMatrix {
            d: self.d,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn add(&self, other: &SymMatrix) -> SymMatrix {
        SymMatrix {
            d: self.d,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    /// `xᵀ A x`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        (0..self.d)
            .map(|i| {
                x[i] * self.data[i * self.d..(i + 1) * self.d]
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a * b)
                    .sum::<f64>()
            })
            .sum()
    }
}

impl Serialize for SymMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        SymMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// Fails with [`Error::DuplicateNodes`] if two entries coincide.
pub fn check_distinct(nodes: &[f64]) -> Result<()> {
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            if nodes[i] == nodes[j] {
                return Err(Error::DuplicateNodes {
                    first: i,
                    second: j,
                    value: nodes[i],
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_construction_checks_asymmetry() {
        let ok = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0 + 1e-15, 3.0]]).unwrap();
        assert_eq!(ok.get(1, 0), 2.0);
        let bad = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![2.1, 3.0]]);
        assert!(matches!(bad, Err(Error::NotSymmetric { .. })));
        assert!(SymMatrix::from_rows(&[vec![1.0, 2.0]]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let a = SymMatrix::from_fn(3, |i, j| (i * 3 + j) as f64);
        let s = serde_json::to_string(&a).unwrap();
        let b: SymMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn quadratic_form_and_inner() {
        let a = SymMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]]).unwrap();
        assert_eq!(a.quadratic_form(&[1.0, -1.0]), 3.0);
        assert_eq!(a.inner(&SymMatrix::identity(2)), 5.0);
        assert_eq!(a.trace(), 5.0);
    }

    #[test]
    fn distinctness() {
        assert!(check_distinct(&[0.0, 1.0, -1.0]).is_ok());
        assert_eq!(
            check_distinct(&[0.0, 1.0, 0.0]),
            Err(Error::DuplicateNodes {
                first: 0,
                second: 2,
                value: 0.0
            })
        );
    }
}
