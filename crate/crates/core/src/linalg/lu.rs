use super::{eigh, Matrix, SymMatrix};
use crate::error::{Error, Result};

/// LU factorization with partial pivoting, `PA = LU`.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: Matrix,
    perm: Vec<usize>,
    sign: f64,
    singular_at: Option<(usize, f64)>,
}

impl Lu {
    /// Factors `a`; a pivot with `|p| ≤ pivot_tol · max|a|` marks the matrix singular.
    pub fn new(a: &Matrix, pivot_tol: f64) -> Result<Self> {
        if a.rows() != a.cols() {
            return Err(Error::DimensionMismatch {
                expected: a.rows(),
                actual: a.cols(),
            });
        }
        let d = a.rows();
        let threshold = pivot_tol * a.max_abs();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..d).collect();
        let mut sign = 1.0;
        let mut singular_at = None;
        for k in 0..d {
            let (p, pmax) = (k..d)
                .map(|i| (i, lu.get(i, k).abs()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if p != k {
                for j in 0..d {
                    let tmp = lu.get(k, j);
                    lu.set(k, j, lu.get(p, j));
                    lu.set(p, j, tmp);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            if pmax <= threshold || pmax == 0.0 {
                singular_at.get_or_insert((k, pmax));
                continue;
            }
            let pivot = lu.get(k, k);
            for i in (k + 1)..d {
                let factor = lu.get(i, k) / pivot;
                lu.set(i, k, factor);
                if factor != 0.0 {
                    for j in (k + 1)..d {
                        lu.set(i, j, lu.get(i, j) - factor * lu.get(k, j));
                    }
                }
            }
        }
        Ok(Self {
            lu,
            perm,
            sign,
            singular_at,
        })
    }

    pub fn determinant(&self) -> f64 {
        (0..self.lu.rows()).map(|i| self.lu.get(i, i)).product::<f64>() * self.sign
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let d = self.lu.rows();
        if b.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: b.len(),
            });
        }
        if let Some((pivot, value)) = self.singular_at {
            return Err(Error::Singular { pivot, value });
        }
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..d {
            let s: f64 = (0..i).map(|j| self.lu.get(i, j) * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..d).rev() {
            let s: f64 = ((i + 1)..d).map(|j| self.lu.get(i, j) * x[j]).sum();
            x[i] = (x[i] - s) / self.lu.get(i, i);
        }
        Ok(x)
    }
}

pub fn solve(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    solve_with(a, b, crate::config::SolverConfig::default().pivot_tol)
}

pub fn solve_with(a: &Matrix, b: &[f64], pivot_tol: f64) -> Result<Vec<f64>> {
    Lu::new(a, pivot_tol)?.solve(b)
}

pub fn determinant(a: &Matrix, pivot_tol: f64) -> Result<f64> {
    Ok(Lu::new(a, pivot_tol)?.determinant())
}

pub fn inverse(a: &Matrix, pivot_tol: f64) -> Result<Matrix> {
    let lu = Lu::new(a, pivot_tol)?;
    let d = a.rows();
    let mut inv = Matrix::zeros(d, d);
    for j in 0..d {
        let mut e = vec![0.0; d];
        e[j] = 1.0;
        let col = lu.solve(&e)?;
        for (i, v) in col.into_iter().enumerate() {
            inv.set(i, j, v);
        }
    }
    Ok(inv)
}

/// Minimum-norm least-squares solution of `J x = r`.
///
/// Uses the eigendecomposition of the smaller of `J Jᵀ` and `Jᵀ J`, discarding
/// eigenvalues below `cutoff · λ_max`.
pub fn least_squares(j: &Matrix, r: &[f64], cutoff: f64) -> Result<Vec<f64>> {
    if r.len() != j.rows() {
        return Err(Error::DimensionMismatch {
            expected: j.rows(),
            actual: r.len(),
        });
    }
    let (rows, cols) = (j.rows(), j.cols());
    let pinv_apply = |g: &SymMatrix, rhs: &[f64]| -> Result<Vec<f64>> {
        let eig = eigh(g)?;
        let lmax = eig.max();
        let d = g.dim();
        let mut out = vec![0.0; d];
        if lmax <= 0.0 {
            return Ok(out);
        }
        for k in 0..d {
            let l = eig.values[k];
            if l <= cutoff * lmax {
                continue;
            }
            let v = eig.vector(k);
            let coef: f64 = v.iter().zip(rhs).map(|(a, b)| a * b).sum::<f64>() / l;
            for (o, vi) in out.iter_mut().zip(&v) {
                *o += coef * vi;
            }
        }
        Ok(out)
    };
    if rows <= cols {
        // x = Jᵀ (J Jᵀ)^+ r
        let g = SymMatrix::from_fn(rows, |a, b| {
            j.row(a).iter().zip(j.row(b)).map(|(x, y)| x * y).sum()
        });
        let y = pinv_apply(&g, r)?;
        Ok((0..cols)
            .map(|c| (0..rows).map(|a| j.get(a, c) * y[a]).sum())
            .collect())
    } else {
        // x = (Jᵀ J)^+ Jᵀ r
        let g = SymMatrix::from_fn(cols, |a, b| (0..rows).map(|k| j.get(k, a) * j.get(k, b)).sum());
        let jt_r: Vec<f64> = (0..cols)
            .map(|c| (0..rows).map(|a| j.get(a, c) * r[a]).sum())
            .collect();
        pinv_apply(&g, &jt_r)
    }
}
