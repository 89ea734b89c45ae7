//! Numerical tolerances and iteration limits shared by every solver in the crate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances and limits for eigensolves, linear solves and SOS feasibility.
///
/// Every numeric threshold used by the solvers is read from here.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Constraint residual allowed in a certificate, and the negativity a
    /// sampled witness must exceed.
    pub eps_certify: f64,
    /// Negative eigenvalue tolerated in a certified Gram matrix.
    pub eps_psd: f64,
    /// Eigenvalues below `rank_tol * lambda_max` are dropped when extracting factors.
    pub rank_tol: f64,
    /// Maximum number of alternating-projection iterations.
    pub max_iter: usize,
    /// Iterations between attempts to polish the current iterate into a certificate.
    pub polish_every: usize,
    /// Random points sampled by `check_sos` before it starts projecting.
    pub refute_samples: usize,
    /// Seed for the refutation sampler inside `check_sos`.
    pub refute_seed: u64,
    /// Minimum negativity (relative to the tensor scale) a dual witness must show.
    pub dual_margin: f64,
    /// Jacobi stopping rule: off-diagonal norm relative to the Frobenius norm.
    pub eig_tol: f64,
    pub eig_max_sweeps: usize,
    /// Relative pivot threshold for LU.
    pub pivot_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            eps_certify: 1e-9,
            eps_psd: 1e-9,
            rank_tol: 1e-10,
            max_iter: 50_000,
            polish_every: 50,
            refute_samples: 2_000,
            refute_seed: 0x5eed,
            dual_margin: 1e-6,
            eig_tol: 1e-12,
            eig_max_sweeps: 100,
            pivot_tol: 1e-12,
        }
    }
}

impl SolverConfig {
    /// Tightened tolerances used when a certificate doubles as a decision.
    pub fn tightened(mut self) -> Self {
        self.eps_certify = self.eps_certify.min(1e-10);
        self.eps_psd = self.eps_psd.min(1e-10);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("eps_certify", self.eps_certify),
            ("eps_psd", self.eps_psd),
            ("rank_tol", self.rank_tol),
            ("dual_margin", self.dual_margin),
            ("eig_tol", self.eig_tol),
            ("pivot_tol", self.pivot_tol),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be positive and finite, got {value}"
                )));
            }
        }
        if self.max_iter == 0 || self.polish_every == 0 || self.eig_max_sweeps == 0 {
            return Err(Error::InvalidArgument(
                "max_iter, polish_every and eig_max_sweeps must be at least 1".into(),
            ));
        }
        Ok(())
    }
}
