//! Gram-matrix description of the SOS cone, its dual spectrahedron, and a
//! semidefinite feasibility solver producing checkable certificates.
//!
//! With `m = 2k` and the degree-`k` monomial basis `[x]_k` of size `d`, a form
//! `A x^m` is a sum of squares iff some PSD `Q` satisfies
//! `⟨A_α, Q⟩ = c_α a_α` for every `|α| = m`, where `A_α` is the 0/1 matrix
//! marking Gram positions `(β, γ)` with `β + γ = α`. Distinct `A_α` have
//! disjoint supports, so projecting onto the affine constraint set is a
//! closed-form update and the feasibility problem can be solved with
//! alternating projections.
//!
//! The dual pairing on exponent-indexed tensors is `⟨b, a⟩ = Σ_α c_α b_α a_α`
//! throughout.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::SolverConfig;
use crate::convolution::hankel_form;
use crate::error::{Error, Result};
use crate::index::{count_indices, enumerate_indices, multinomial, MultiIndex};
use crate::linalg::{self, eigh_with, EigenDecomposition, Matrix, SymMatrix};
use crate::sampling;
use crate::tensor::{hankel_to_symmetric, rank_one, FormEvaluator, GeneratingVector, SymmetricTensor};
use crate::vandermonde::VandermondeFrame;

/// One linear constraint `⟨A_α, Q⟩ = c_α a_α`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub alpha: MultiIndex,
    /// Multinomial weight `c_α`.
    pub weight: u128,
    /// Ordered Gram positions `(i, j)` with `β_i + β_j = α`; both `(i, j)` and `(j, i)` appear.
    pub positions: Vec<(usize, usize)>,
}

impl Constraint {
    /// `‖A_α‖_F²`, the number of marked positions.
    pub fn norm_sq(&self) -> usize {
        self.positions.len()
    }
}

/// Monomial basis and constraint matrices for one even shape `(m, n)`.
#[derive(Debug, Clone)]
pub struct GramFrame {
    m: usize,
    n: usize,
    basis: Vec<MultiIndex>,
    constraints: Vec<Constraint>,
    evaluator: FormEvaluator,
}

pub fn build_gram_frame(m: usize, n: usize) -> Result<GramFrame> {
    GramFrame::new(m, n)
}

impl GramFrame {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m % 2 == 1 {
            return Err(Error::OddOrder(m));
        }
        if n == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        let basis = enumerate_indices(m / 2, n);
        let mut constraints: Vec<Constraint> = enumerate_indices(m, n)
            .into_iter()
            .map(|alpha| {
                Ok(Constraint {
                    weight: multinomial(&alpha)?,
                    alpha,
                    positions: Vec::new(),
                })
            })
            .collect::<Result<_>>()?;
        for (i, beta) in basis.iter().enumerate() {
            for (j, gamma) in basis.iter().enumerate() {
                constraints[beta.add(gamma).rank()].positions.push((i, j));
            }
        }
        Ok(Self {
            m,
            n,
            basis,
            constraints,
            evaluator: FormEvaluator::new(m, n)?,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Size `d` of the Gram matrix.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The degree-`m/2` monomial basis in canonical order.
    pub fn basis(&self) -> &[MultiIndex] {
        &self.basis
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn evaluator(&self) -> &FormEvaluator {
        &self.evaluator
    }

    /// Dense `A_α` for constraint `idx`.
    pub fn constraint_matrix(&self, idx: usize) -> SymMatrix {
        let d = self.dim();
        let mut data = vec![0.0; d * d];
        for &(i, j) in &self.constraints[idx].positions {
            data[i * d + j] = 1.0;
        }
        SymMatrix::from_raw(d, data)
    }

    /// `⟨A_α, A_β⟩`, counted exactly.
    pub fn constraint_inner(&self, a: usize, b: usize) -> usize {
        let pa = &self.constraints[a].positions;
        self.constraints[b]
            .positions
            .iter()
            .filter(|p| pa.contains(p))
            .count()
    }

    /// `[x]_k`, the basis monomials evaluated at `x`.
    pub fn monomials(&self, x: &[f64]) -> Vec<f64> {
        self.basis.iter().map(|b| b.monomial(x)).collect()
    }

    /// `(⟨A_α, Q⟩)_α` in canonical order.
    pub fn constraint_values(&self, q: &SymMatrix) -> Vec<f64> {
        let d = self.dim();
        let data = q.as_slice();
        self.constraints
            .iter()
            .map(|c| c.positions.iter().map(|&(i, j)| data[i * d + j]).sum())
            .collect()
    }

    /// `(c_α a_α)_α`.
    pub fn targets(&self, t: &SymmetricTensor) -> Result<Vec<f64>> {
        t.check_shape(self.m, self.n)?;
        Ok(self
            .evaluator
            .weights()
            .iter()
            .zip(t.coeffs())
            .map(|(c, a)| c * a)
            .collect())
    }

    /// `Σ_α b_α A_α`.
    pub fn dual_matrix(&self, b: &[f64]) -> SymMatrix {
        let d = self.dim();
        let mut data = vec![0.0; d * d];
        for (c, &bv) in self.constraints.iter().zip(b) {
            for &(i, j) in &c.positions {
                data[i * d + j] = bv;
            }
        }
        SymMatrix::from_raw(d, data)
    }

    /// Orthogonal projection of `B` onto `span{A_α}`, as coefficients `⟨B, A_α⟩ / ‖A_α‖²`.
    pub fn span_coefficients(&self, b: &SymMatrix) -> Vec<f64> {
        self.constraint_values(b)
            .into_iter()
            .zip(&self.constraints)
            .map(|(v, c)| v / c.norm_sq() as f64)
            .collect()
    }

    fn check_matrix(&self, q: &SymMatrix) -> Result<()> {
        if q.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: q.dim(),
            });
        }
        Ok(())
    }

    /// Projects `Q` onto `{Q : ⟨A_α, Q⟩ = target_α ∀α}`.
    fn project_affine(&self, q: &mut [f64], targets: &[f64]) {
        let d = self.dim();
        for (c, &target) in self.constraints.iter().zip(targets) {
            let current: f64 = c.positions.iter().map(|&(i, j)| q[i * d + j]).sum();
            let shift = (target - current) / c.norm_sq() as f64;
            for &(i, j) in &c.positions {
                q[i * d + j] += shift;
            }
        }
    }

    /// `max_α |⟨A_α, Q⟩ − target_α|`.
    fn residual(&self, q: &[f64], targets: &[f64]) -> f64 {
        let d = self.dim();
        self.constraints
            .iter()
            .zip(targets)
            .map(|(c, t)| {
                let v: f64 = c.positions.iter().map(|&(i, j)| q[i * d + j]).sum();
                (v - t).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// The tensor whose form is `[x]_kᵀ Q [x]_k`: `a_α = ⟨A_α, Q⟩ / c_α`.
pub fn gram_to_tensor(q: &SymMatrix, frame: &GramFrame) -> Result<SymmetricTensor> {
    frame.check_matrix(q)?;
    let coeffs = frame
        .constraint_values(q)
        .into_iter()
        .zip(frame.evaluator.weights())
        .map(|(v, c)| v / c)
        .collect();
    SymmetricTensor::from_coeffs(frame.m, frame.n, coeffs)
}

/// A verified SOS decomposition `A x^m = [x]_kᵀ Q [x]_k = Σ_i (c_i • [x]_k)²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SosCertificate {
    /// Monomial basis indexing the rows and columns of `Q`.
    pub basis: Vec<MultiIndex>,
    #[serde(rename = "Q")]
    pub q: SymMatrix,
    /// Coefficient vectors `c_i` of the squared polynomials.
    pub factors: Vec<Vec<f64>>,
    /// `max_α |⟨A_α, Q⟩ − c_α a_α|`, recomputed from `Q`.
    pub residual: f64,
    /// Smallest eigenvalue of `Q`, recomputed from `Q`.
    pub min_eig: f64,
    pub iterations: usize,
}

impl SosCertificate {
    pub fn sos_rank(&self) -> usize {
        self.factors.len()
    }

    /// `Σ_i (c_i • [x]_k)²`.
    pub fn eval_squares(&self, x: &[f64]) -> f64 {
        let mono: Vec<f64> = self.basis.iter().map(|b| b.monomial(x)).collect();
        self.factors
            .iter()
            .map(|c| c.iter().zip(&mono).map(|(a, b)| a * b).sum::<f64>().powi(2))
            .sum()
    }
}

/// Evidence that a tensor is not SOS.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "witness", rename_all = "snake_case")]
pub enum Refutation {
    /// A point where the form is negative, so it is not even PSD.
    Point { x: Vec<f64>, value: f64 },
    /// A member `b` of the dual cone (`Σ b_α A_α ⪰ 0`) with `⟨b, a⟩ < 0`.
    Dual {
        b: SymmetricTensor,
        pairing: f64,
        min_eig: f64,
    },
}

/// Solver state when neither a certificate nor a refutation was found.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub iterations: usize,
    /// Constraint residual of the last PSD iterate.
    pub residual: f64,
    /// Frobenius distance between the last PSD iterate and its affine projection.
    pub gap: f64,
    /// Smallest form value seen while sampling.
    pub min_sampled_value: Option<f64>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FeasibilityVerdict {
    Certified(SosCertificate),
    Refuted(Refutation),
    Inconclusive(Diagnostics),
}

impl FeasibilityVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Self::Certified(_))
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Self::Refuted(_))
    }

    pub fn certificate(&self) -> Option<&SosCertificate> {
        match self {
            Self::Certified(c) => Some(c),
            _ => None,
        }
    }

    /// Process exit code: 0 certified, 1 refuted, 2 inconclusive.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Certified(_) => 0,
            Self::Refuted(_) => 1,
            Self::Inconclusive(_) => 2,
        }
    }
}

pub fn check_sos(t: &SymmetricTensor, config: &SolverConfig) -> Result<FeasibilityVerdict> {
    let frame = GramFrame::new(t.m(), t.n())?;
    check_sos_with_frame(t, &frame, config)
}

/// Decides SOS membership of `t` numerically.
///
/// Looks for a negative form value by sampling first, then runs Dykstra's
/// alternating projections between the affine constraint set and the PSD
/// cone. Periodically the current iterate is polished by Gauss–Newton on a
/// low-rank factorization `Q = R Rᵀ` and, when the sets look disjoint,
/// turned into a dual witness. Every reported certificate or witness is
/// re-verified from scratch.
pub fn check_sos_with_frame(
    t: &SymmetricTensor,
    frame: &GramFrame,
    config: &SolverConfig,
) -> Result<FeasibilityVerdict> {
    config.validate()?;
    let targets = frame.targets(t)?;
    let scale = targets.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let d = frame.dim();
    if scale == 0.0 {
        return Ok(FeasibilityVerdict::Certified(SosCertificate {
            basis: frame.basis.clone(),
            q: SymMatrix::zeros(d),
            factors: Vec::new(),
            residual: 0.0,
            min_eig: 0.0,
            iterations: 0,
        }));
    }

    let mut min_sampled = None;
    if config.refute_samples > 0 {
        let (x, value) = sample_min(frame.evaluator(), t, config.refute_samples, config.refute_seed)?;
        if value < -config.eps_certify * scale.max(1.0) {
            return Ok(FeasibilityVerdict::Refuted(Refutation::Point { x, value }));
        }
        min_sampled = Some(value);
    }

    let solver = Solver {
        frame,
        t,
        targets: &targets,
        normalized: targets.iter().map(|x| x / scale).collect(),
        scale,
        config,
    };
    solver.run(min_sampled)
}

struct Solver<'a> {
    frame: &'a GramFrame,
    t: &'a SymmetricTensor,
    targets: &'a [f64],
    normalized: Vec<f64>,
    scale: f64,
    config: &'a SolverConfig,
}

impl Solver<'_> {
    fn eigh(&self, q: &SymMatrix) -> Result<EigenDecomposition> {
        eigh_with(q, self.config.eig_tol, self.config.eig_max_sweeps)
    }

    fn run(&self, min_sampled: Option<f64>) -> Result<FeasibilityVerdict> {
        let d = self.frame.dim();
        // Dykstra: the affine set needs no correction term, the PSD cone does
        let mut x = vec![0.0; d * d];
        let mut p = vec![0.0; d * d];
        let mut residual = f64::INFINITY;
        let mut gap = f64::INFINITY;
        let target = 0.5 * self.config.eps_certify / self.scale;

        for it in 1..=self.config.max_iter {
            let mut y = x.clone();
            self.frame.project_affine(&mut y, &self.normalized);
            let z: Vec<f64> = y.iter().zip(&p).map(|(a, b)| a + b).collect();
            let eig = self.eigh(&SymMatrix::from_raw(d, z.clone()))?;
            let projected = eig.reconstruct_with(|l| l.max(0.0));
            x = projected.as_slice().to_vec();
            p = z.iter().zip(&x).map(|(a, b)| a - b).collect();

            residual = self.frame.residual(&x, &self.normalized);
            if residual <= target {
                if let Some(cert) = self.finalize(&projected, it)? {
                    return Ok(FeasibilityVerdict::Certified(cert));
                }
            }
            if it % self.config.polish_every == 0 || it == self.config.max_iter {
                if let Some(cert) = self.polish(&projected, it)? {
                    return Ok(FeasibilityVerdict::Certified(cert));
                }
                let mut ax = x.clone();
                self.frame.project_affine(&mut ax, &self.normalized);
                gap = x
                    .iter()
                    .zip(&ax)
                    .map(|(a, b)| (a - b).powi(2))
                    .sum::<f64>()
                    .sqrt();
                if residual > 1e3 * target {
                    if let Some(r) = self.dual_witness(&x)? {
                        return Ok(FeasibilityVerdict::Refuted(r));
                    }
                }
            }
        }
        Ok(FeasibilityVerdict::Inconclusive(Diagnostics {
            iterations: self.config.max_iter,
            residual: residual * self.scale,
            gap: gap * self.scale,
            min_sampled_value: min_sampled,
            note: "no certificate or refutation found; this does not show the form is not SOS".into(),
        }))
    }

    /// Rescales a normalized Gram matrix and accepts it only if the recomputed
    /// residual and minimum eigenvalue meet the tolerances. Accepted matrices
    /// are first refined by Gauss–Newton on their own factorization.
    fn finalize(&self, normalized_q: &SymMatrix, iterations: usize) -> Result<Option<SosCertificate>> {
        let normalized_q = match self.refine(normalized_q)? {
            Some(better) => better,
            None => normalized_q.clone(),
        };
        let q = normalized_q.scaled(self.scale);
        let residual = self.frame.residual(q.as_slice(), self.targets);
        if residual > self.config.eps_certify {
            return Ok(None);
        }
        let eig = self.eigh(&q)?;
        let min_eig = eig.min();
        if min_eig < -self.config.eps_psd {
            return Ok(None);
        }
        Ok(Some(SosCertificate {
            basis: self.frame.basis.clone(),
            factors: eig.factors(self.config.rank_tol),
            q,
            residual,
            min_eig,
            iterations,
        }))
    }

    /// Gauss–Newton started from the factorization of `q`; returns a matrix
    /// with a smaller residual, if one is found.
    fn refine(&self, q: &SymMatrix) -> Result<Option<SymMatrix>> {
        let before = self.frame.residual(q.as_slice(), &self.normalized);
        if before == 0.0 {
            return Ok(None);
        }
        let eig = self.eigh(q)?;
        let lmax = eig.max();
        if lmax <= 0.0 {
            return Ok(None);
        }
        let rank = eig.values.iter().filter(|&&l| l > 1e-12 * lmax).count();
        Ok(self
            .gauss_newton(&eig, rank)
            .filter(|(_, res)| *res < before)
            .map(|(q, _)| q))
    }

    /// Tries the affine projection of `x` and then Gauss–Newton on `Q = R Rᵀ`,
    /// first for the ranks suggested by the spectrum of `x`, then for the rest.
    fn polish(&self, x: &SymMatrix, iterations: usize) -> Result<Option<SosCertificate>> {
        let d = self.frame.dim();
        let mut y = x.as_slice().to_vec();
        self.frame.project_affine(&mut y, &self.normalized);
        if let Some(cert) = self.finalize(&SymMatrix::from_raw(d, y), iterations)? {
            return Ok(Some(cert));
        }

        let eig = self.eigh(x)?;
        let lmax = eig.max();
        if lmax <= 0.0 {
            return Ok(None);
        }
        let mut ranks: Vec<usize> = [1e-2, 1e-4, 1e-6, 1e-9]
            .iter()
            .map(|&rel| eig.values.iter().filter(|&&l| l > rel * lmax).count().max(1))
            .collect();
        ranks.extend(1..=d);
        let mut tried = vec![false; d + 1];
        let target = 0.5 * self.config.eps_certify / self.scale;
        for r in ranks {
            if std::mem::replace(&mut tried[r], true) {
                continue;
            }
            if let Some((q, res)) = self.gauss_newton(&eig, r) {
                if res <= target {
                    if let Some(cert) = self.finalize(&q, iterations)? {
                        return Ok(Some(cert));
                    }
                }
            }
        }
        Ok(None)
    }

    /// Minimizes the constraint residual over `Q = R Rᵀ` with `R` of width
    /// `rank`, seeded from the leading eigenpairs. Returns the best `Q` seen
    /// and its residual.
    fn gauss_newton(&self, eig: &EigenDecomposition, rank: usize) -> Option<(SymMatrix, f64)> {
        let d = self.frame.dim();
        let nc = self.frame.constraints.len();
        // R is d × rank, row-major
        let mut r = vec![0.0; d * rank];
        for (col, j) in (0..d).rev().take(rank).enumerate() {
            let s = eig.values[j].max(0.0).sqrt();
            for i in 0..d {
                r[i * rank + col] = s * eig.vector_entry(i, j);
            }
        }
        let gram = |r: &[f64]| -> SymMatrix {
            SymMatrix::from_fn(d, |i, j| {
                (0..rank).map(|l| r[i * rank + l] * r[j * rank + l]).sum()
            })
        };
        let mut best: Option<(SymMatrix, f64)> = None;
        let mut stalls = 0;
        for _ in 0..40 {
            let q = gram(&r);
            let values = self.frame.constraint_values(&q);
            let res: Vec<f64> = self.normalized.iter().zip(&values).map(|(t, v)| t - v).collect();
            let norm = res.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
            match &best {
                Some((_, b)) if norm >= *b => {
                    stalls += 1;
                    if stalls >= 3 {
                        break;
                    }
                }
                _ => {
                    stalls = 0;
                    best = Some((q, norm));
                }
            }
            if norm == 0.0 {
                break;
            }
            // ∂⟨A_α, R Rᵀ⟩ / ∂R_{il} = 2 Σ_{j : (i,j) ∈ A_α} R_{jl}
            let mut jac = Matrix::zeros(nc, d * rank);
            for (row, c) in self.frame.constraints.iter().enumerate() {
                for &(i, j) in &c.positions {
                    for l in 0..rank {
                        let col = i * rank + l;
                        jac.set(row, col, jac.get(row, col) + 2.0 * r[j * rank + l]);
                    }
                }
            }
            let Ok(step) = linalg::least_squares(&jac, &res, 1e-14) else {
                break;
            };
            for (ri, si) in r.iter_mut().zip(&step) {
                *ri += si;
            }
        }
        best
    }

    /// Builds `b` from the displacement between the PSD iterate `x` and its
    /// affine projection; the displacement lies in `span{A_α}` and, near the
    /// closest pair of two disjoint sets, in the PSD cone.
    fn dual_witness(&self, x: &[f64]) -> Result<Option<Refutation>> {
        let d = self.frame.dim();
        let mut y = x.to_vec();
        self.frame.project_affine(&mut y, &self.normalized);
        let disp = SymMatrix::from_raw(d, x.iter().zip(&y).map(|(a, b)| a - b).collect());
        let mut b = self.frame.span_coefficients(&disp);
        let bmax = b.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if bmax < 1e-12 {
            return Ok(None);
        }
        b.iter_mut().for_each(|v| *v /= bmax);

        let lmin = self.eigh(&self.frame.dual_matrix(&b))?.min();
        if lmin < 0.0 {
            // shift by a positive definite dual member
            let b0 = gaussian_moments(self.frame.m, self.frame.n);
            let l0 = self.eigh(&self.frame.dual_matrix(&b0))?.min();
            if l0 <= 0.0 {
                return Ok(None);
            }
            let shift = -lmin / l0 * (1.0 + 1e-6) + 1e-12;
            for (bi, b0i) in b.iter_mut().zip(&b0) {
                *bi += shift * b0i;
            }
        }
        let min_eig = self.eigh(&self.frame.dual_matrix(&b))?.min();
        let pairing = self.frame.evaluator.pairing(&b, self.t.coeffs());
        if min_eig < 0.0 || pairing >= -self.config.dual_margin * self.scale {
            return Ok(None);
        }
        Ok(Some(Refutation::Dual {
            b: SymmetricTensor::from_coeffs(self.frame.m, self.frame.n, b)?,
            pairing,
            min_eig,
        }))
    }
}

/// Gaussian moments `E[x^α]` for `x ~ N(0, I_n)`: `Π_i (α_i − 1)!!` when every
/// `α_i` is even, zero otherwise. Their moment matrix is positive definite.
pub fn gaussian_moments(m: usize, n: usize) -> Vec<f64> {
    enumerate_indices(m, n)
        .iter()
        .map(|alpha| {
            alpha
                .exponents()
                .iter()
                .map(|&a| {
                    if a % 2 == 1 {
                        0.0
                    } else {
                        (1..a).step_by(2).map(f64::from).product::<f64>()
                    }
                })
                .product()
        })
        .collect()
}

/// Minimum of the form over the `2n` signed coordinate vectors followed by
/// `count` random unit vectors.
pub(crate) fn sample_min(
    eval: &FormEvaluator,
    t: &SymmetricTensor,
    count: usize,
    seed: u64,
) -> Result<(Vec<f64>, f64)> {
    let n = t.n();
    let mut best_x = vec![0.0; n];
    let mut best = f64::INFINITY;
    let mut consider = |x: Vec<f64>| -> Result<()> {
        let v = eval.eval(t, &x)?;
        if v < best {
            best = v;
            best_x = x;
        }
        Ok(())
    };
    for i in 0..n {
        for sign in [1.0, -1.0] {
            let mut e = vec![0.0; n];
            e[i] = sign;
            consider(e)?;
        }
    }
    let mut rng = sampling::rng(seed);
    for _ in 0..count {
        consider(sampling::unit_vec(&mut rng, n))?;
    }
    Ok((best_x, best))
}

/// SOS membership of the Hankel tensor generated by `gv`.
///
/// A certificate is additionally checked against the convolution-side form
/// `v • x^{*m}` at 50 random points; a mismatch downgrades it to inconclusive.
pub fn check_hsos(gv: &GeneratingVector, config: &SolverConfig) -> Result<FeasibilityVerdict> {
    gv.require_even()?;
    let t = hankel_to_symmetric(gv);
    let verdict = check_sos(&t, config)?;
    let FeasibilityVerdict::Certified(cert) = &verdict else {
        return Ok(verdict);
    };
    let mut rng = sampling::rng_stream(config.refute_seed, 1);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let x = sampling::unit_vec(&mut rng, gv.n());
        let direct = hankel_form(gv, &x)?;
        let squares = cert.eval_squares(&x);
        worst = worst.max((direct - squares).abs() / (1.0 + direct.abs()));
    }
    if worst > 1e-8 {
        return Ok(FeasibilityVerdict::Inconclusive(Diagnostics {
            iterations: cert.iterations,
            residual: cert.residual,
            gap: 0.0,
            min_sampled_value: None,
            note: format!("certificate disagrees with the Hankel form by {worst:e} (relative)"),
        }));
    }
    Ok(verdict)
}

/// Outcome of a dual-cone membership test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualMembership {
    pub member: bool,
    pub min_eig: f64,
}

/// Whether `b` lies in the dual SOS cone, i.e. `Σ_α b_α A_α ⪰ 0`.
pub fn dual_membership(b: &SymmetricTensor, frame: &GramFrame, eps_psd: f64) -> Result<DualMembership> {
    b.check_shape(frame.m, frame.n)?;
    let min_eig = linalg::eigh(&frame.dual_matrix(b.coeffs()))?.min();
    Ok(DualMembership {
        member: min_eig >= -eps_psd,
        min_eig,
    })
}

/// The moment vector `b_α = w^α`; its dual matrix is `[w]_k [w]_kᵀ`.
pub fn moment_vector(w: &[f64], m: usize) -> SymmetricTensor {
    rank_one(w, m).to_symmetric()
}

/// A sampled element of the dual SOS cone together with its node image.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SgDualSample {
    pub b: SymmetricTensor,
    /// `(⟨b, u_k^{⊗m}⟩)_k`: the form of `b` at every short node vector.
    pub image: Vec<f64>,
}

/// Samples the dual cone of the SOS coefficient cone.
///
/// Each `b` is a random convex combination of moment vectors, nudged by a
/// random PSD matrix projected onto `span{A_α}`; the nudge is kept only if
/// `b` stays in the dual SOS cone.
pub fn sg_dual_sample(
    frame: &GramFrame,
    vframe: &VandermondeFrame,
    count: usize,
    seed: u64,
) -> Result<Vec<SgDualSample>> {
    let (m, n) = (frame.m, frame.n);
    if vframe.m() != m || vframe.n() != n {
        return Err(Error::ShapeMismatch {
            m,
            n,
            other_m: vframe.m(),
            other_n: vframe.n(),
        });
    }
    let d = frame.dim();
    let mut rng = sampling::rng(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let terms = rng.random_range(1..=d + 1);
        let weights = sampling::simplex_weights(&mut rng, terms);
        let mut b = vec![0.0; count_indices(m, n)];
        for w in &weights {
            let base = sampling::normal_vec(&mut rng, n);
            for (bi, mi) in b.iter_mut().zip(moment_vector(&base, m).coeffs()) {
                *bi += w * mi;
            }
        }
        let factors: Vec<Vec<f64>> = (0..2).map(|_| sampling::normal_vec(&mut rng, d)).collect();
        let nudge = frame.span_coefficients(&SymMatrix::from_outer_products(d, &factors));
        let eps: f64 = rng.random_range(0.0..0.1);
        let nudged: Vec<f64> = b.iter().zip(&nudge).map(|(a, c)| a + eps * c).collect();
        if linalg::eigh(&frame.dual_matrix(&nudged))?.min() >= 0.0 {
            b = nudged;
        }
        let b = SymmetricTensor::from_coeffs(m, n, b)?;
        let image = (0..vframe.len())
            .map(|k| frame.evaluator.eval(&b, &vframe.short_vector(k)))
            .collect::<Result<_>>()?;
        out.push(SgDualSample { b, image });
    }
    Ok(out)
}

/// A random PSD matrix `Σ_i g_i g_iᵀ / rank` with standard normal `g_i`.
pub fn random_psd<R: Rng + ?Sized>(rng: &mut R, d: usize, rank: usize) -> SymMatrix {
    let factors: Vec<Vec<f64>> = (0..rank).map(|_| sampling::normal_vec(rng, d)).collect();
    SymMatrix::from_outer_products(d, &factors).scaled(1.0 / rank.max(1) as f64)
}
