use super::SymMatrix;
use crate::config::SolverConfig;
use crate::error::{Error, Result};

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    /// Column `j` (row-major, `d × d`) is the eigenvector for `values[j]`.
    vectors: Vec<f64>,
    pub sweeps: usize,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, j: usize) -> Vec<f64> {
        let d = self.dim();
        (0..d).map(|i| self.vectors[i * d + j]).collect()
    }

    #[inline]
    pub fn vector_entry(&self, i: usize, j: usize) -> f64 {
        self.vectors[i * self.dim() + j]
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// `Σ_j f(λ_j) v_j v_jᵀ`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> SymMatrix {
        let d = self.dim();
        let mapped: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        SymMatrix::from_fn(d, |i, k| {
            (0..d)
                .filter(|&j| mapped[j] != 0.0)
                .map(|j| mapped[j] * self.vector_entry(i, j) * self.vector_entry(k, j))
                .sum()
        })
    }

    pub fn reconstruct(&self) -> SymMatrix {
        self.reconstruct_with(|l| l)
    }
}

pub fn eigh(a: &SymMatrix) -> Result<EigenDecomposition> {
    let cfg = SolverConfig::default();
    eigh_with(a, cfg.eig_tol, cfg.eig_max_sweeps)
}

/// Cyclic Jacobi eigensolver.
///
/// Sweeps over all `(p, q)` pairs, annihilating each off-diagonal entry with a
/// plane rotation, until the off-diagonal Frobenius norm drops below
/// `tol · ‖A‖_F`.
pub fn eigh_with(a: &SymMatrix, tol: f64, max_sweeps: usize) -> Result<EigenDecomposition> {
    let d = a.dim();
    let mut m = a.as_slice().to_vec();
    let mut v = vec![0.0; d * d];
    for i in 0..d {
        v[i * d + i] = 1.0;
    }
    let threshold = tol * a.frobenius();

    let off_norm = |m: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    s += m[i * d + j] * m[i * d + j];
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    loop {
        let off = off_norm(&m);
        if off <= threshold {
            break;
        }
        if sweeps == max_sweeps {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        sweeps += 1;
        for p in 0..d {
            for q in (p + 1)..d {
                let apq = m[p * d + q];
                if apq == 0.0 {
                    continue;
                }
                let app = m[p * d + p];
                let aqq = m[q * d + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // A ← Jᵀ A J
                for k in 0..d {
                    let akp = m[k * d + p];
                    let akq = m[k * d + q];
                    m[k * d + p] = c * akp - s * akq;
                    m[k * d + q] = s * akp + c * akq;
                }
                for k in 0..d {
                    let apk = m[p * d + k];
                    let aqk = m[q * d + k];
                    m[p * d + k] = c * apk - s * aqk;
                    m[q * d + k] = s * apk + c * aqk;
                }
                m[p * d + q] = 0.0;
                m[q * d + p] = 0.0;
                for k in 0..d {
                    let vkp = v[k * d + p];
                    let vkq = v[k * d + q];
                    v[k * d + p] = c * vkp - s * vkq;
                    v[k * d + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| m[i * d + i].total_cmp(&m[j * d + j]));
    let values = order.iter().map(|&i| m[i * d + i]).collect();
    let mut vectors = vec![0.0; d * d];
    for (new_j, &old_j) in order.iter().enumerate() {
        for i in 0..d {
            vectors[i * d + new_j] = v[i * d + old_j];
        }
    }
    Ok(EigenDecomposition {
        values,
        vectors,
        sweeps,
    })
}

/// Nearest PSD matrix in Frobenius norm: negative eigenvalues are clipped to zero.
pub fn project_psd(a: &SymMatrix) -> Result<SymMatrix> {
    Ok(eigh(a)?.reconstruct_with(|l| l.max(0.0)))
}

/// Factors `c_i = √λ_i v_i` with `Σ c_i c_iᵀ ≈ Q`, keeping eigenvalues above
/// `rank_tol · λ_max`. Factors are ordered by decreasing eigenvalue.
pub fn factorize_psd(q: &SymMatrix, rank_tol: f64) -> Result<Vec<Vec<f64>>> {
    let eig = eigh(q)?;
    let lmax = eig.max();
    let lmin = eig.min();
    if lmin < -1e-8 * lmax.max(0.0) || (lmax <= 0.0 && lmin < 0.0) {
        return Err(Error::NotPsd { min_eig: lmin });
    }
    Ok(eig.factors(rank_tol))
}

impl EigenDecomposition {
    /// `√λ_j v_j` for every `λ_j > rank_tol · λ_max`, largest first; negative
    /// eigenvalues are ignored.
    pub fn factors(&self, rank_tol: f64) -> Vec<Vec<f64>> {
        let lmax = self.max();
        if lmax <= 0.0 {
            return Vec::new();
        }
        (0..self.dim())
            .rev()
            .filter(|&j| self.values[j] > rank_tol * lmax)
            .map(|j| {
                let s = self.values[j].sqrt();
                self.vector(j).into_iter().map(|x| s * x).collect()
            })
            .collect()
    }
}
