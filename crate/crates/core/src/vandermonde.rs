//! Vandermonde node frames and the coordinate maps between coefficient cones
//! and Hankel cones.
//!
//! Fix distinct nodes `u_0, …, u_{N-1}` with `N = (n-1)m+1`. The rank-one
//! tensor `u_k^{⊗m}` of the short vector `(1, u_k, …, u_k^{n-1})` is a Hankel
//! tensor whose generating vector is the long vector `ũ_k = (1, u_k, …,
//! u_k^{N-1})`. Collecting the long vectors as the columns of `U`, every
//! Hankel tensor has the unique decomposition `v = U α`.

use serde::{Deserialize, Serialize};

use crate::convolution::power_vector;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::tensor::{generating_len, FormEvaluator, GeneratingVector, SymmetricTensor};

/// Node gap below which a frame is flagged as badly conditioned.
pub const MIN_WELL_SEPARATED_GAP: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFrame")]
pub struct VandermondeFrame {
    m: usize,
    n: usize,
    nodes: Vec<f64>,
}

#[derive(Deserialize)]
struct RawFrame {
    m: usize,
    n: usize,
    nodes: Vec<f64>,
}

impl TryFrom<RawFrame> for VandermondeFrame {
    type Error = Error;

    fn try_from(raw: RawFrame) -> Result<Self> {
        VandermondeFrame::new(raw.m, raw.n, raw.nodes)
    }
}

impl VandermondeFrame {
    pub fn new(m: usize, n: usize, nodes: Vec<f64>) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidArgument(format!(
                "order and dimension must be positive, got m={m} n={n}"
            )));
        }
        let expected = generating_len(m, n);
        if nodes.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: nodes.len(),
            });
        }
        if nodes.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("nodes must be finite".into()));
        }
        linalg::check_distinct(&nodes)?;
        Ok(Self { m, n, nodes })
    }

    /// Chebyshev nodes `cos(π(2k+1)/(2N))`.
    pub fn chebyshev(m: usize, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        let count = generating_len(m, n);
        let nodes = (0..count)
            .map(|k| (std::f64::consts::PI * (2 * k + 1) as f64 / (2 * count) as f64).cos())
            .collect();
        Self::new(m, n, nodes)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `(1, u_k, …, u_k^{n-1})`.
    pub fn short_vector(&self, k: usize) -> Vec<f64> {
        power_vector(self.nodes[k], self.n)
    }

    /// `(1, u_k, …, u_k^{(n-1)m})`, the generating vector of `u_k^{⊗m}`.
    pub fn long_vector(&self, k: usize) -> Vec<f64> {
        power_vector(self.nodes[k], self.len())
    }

    /// The square matrix `U` with column `k` equal to the long vector of node `k`.
    pub fn u_matrix(&self) -> Matrix {
        Matrix::from_fn(self.len(), self.len(), |j, k| self.nodes[k].powi(j as i32))
    }

    /// Smallest pairwise distance between nodes.
    pub fn min_gap(&self) -> f64 {
        let mut sorted = self.nodes.clone();
        sorted.sort_by(f64::total_cmp);
        sorted
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }

    /// A diagnostic when nodes are closer than [`MIN_WELL_SEPARATED_GAP`].
    pub fn conditioning_warning(&self) -> Option<String> {
        let gap = self.min_gap();
        (gap < MIN_WELL_SEPARATED_GAP)
            .then(|| format!("nodes are nearly coincident (min gap {gap:e}); U is badly conditioned"))
    }

    fn check_shape(&self, m: usize, n: usize) -> Result<()> {
        if self.m != m || self.n != n {
            return Err(Error::ShapeMismatch {
                m: self.m,
                n: self.n,
                other_m: m,
                other_n: n,
            });
        }
        Ok(())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                actual: len,
            });
        }
        Ok(())
    }
}

/// Default frame: Chebyshev nodes for the given shape.
pub fn default_frame(m: usize, n: usize) -> Result<VandermondeFrame> {
    VandermondeFrame::chebyshev(m, n)
}

/// Coefficients `α` of `A = Σ_k α_k u_k^{⊗m}` relative to a frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VandermondeCoefficients {
    pub alpha: Vec<f64>,
}

impl VandermondeCoefficients {
    /// Whether `α` lies in the nonnegative orthant, which is contained in the
    /// coefficient cone of PSD Hankel tensors.
    pub fn is_nonnegative(&self) -> bool {
        self.alpha.iter().all(|&a| a >= 0.0)
    }
}

/// Solves `U α = v`.
pub fn decompose(gv: &GeneratingVector, frame: &VandermondeFrame) -> Result<VandermondeCoefficients> {
    frame.check_shape(gv.m(), gv.n())?;
    let alpha = linalg::vandermonde_solve(frame.nodes(), gv.values())?;
    Ok(VandermondeCoefficients { alpha })
}

/// `v = U α`.
pub fn compose(coeffs: &VandermondeCoefficients, frame: &VandermondeFrame) -> Result<GeneratingVector> {
    frame.check_len(coeffs.alpha.len())?;
    let mut v = vec![0.0; frame.len()];
    for (k, &a) in coeffs.alpha.iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        let u = frame.nodes()[k];
        let mut p = 1.0;
        for vj in v.iter_mut() {
            *vj += a * p;
            p *= u;
        }
    }
    GeneratingVector::new(frame.m(), frame.n(), v)
}

/// `‖U α − v‖₂`.
pub fn reconstruction_residual(
    gv: &GeneratingVector,
    coeffs: &VandermondeCoefficients,
    frame: &VandermondeFrame,
) -> Result<f64> {
    let back = compose(coeffs, frame)?;
    Ok(back
        .values()
        .iter()
        .zip(gv.values())
        .map(|(a, b)| (a - b).powi(2))
        .sum::<f64>()
        .sqrt())
}

/// `(A u_0^m, …, A u_{N-1}^m)`: the form of `t` evaluated at every short node vector.
pub fn dual_image_point(t: &SymmetricTensor, frame: &VandermondeFrame) -> Result<Vec<f64>> {
    frame.check_shape(t.m(), t.n())?;
    let eval = FormEvaluator::new(t.m(), t.n())?;
    (0..frame.len())
        .map(|k| eval.eval(t, &frame.short_vector(k)))
        .collect()
}

/// `Uᵀ y`; component `k` is the polynomial with coefficients `y` evaluated at `u_k`.
pub fn ut_image(y: &[f64], frame: &VandermondeFrame) -> Result<Vec<f64>> {
    frame.check_len(y.len())?;
    Ok(frame
        .nodes()
        .iter()
        .map(|&u| y.iter().rev().fold(0.0, |acc, &c| acc * u + c))
        .collect())
}

/// `(Uᵀ)^{-1} β`, the map carrying the coefficient-side dual cone onto the
/// dual cone of SOS Hankel tensors.
pub fn hsos_dual_map(beta: &[f64], frame: &VandermondeFrame) -> Result<Vec<f64>> {
    frame.check_len(beta.len())?;
    linalg::vandermonde_transpose_solve(frame.nodes(), beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convolution::{conv_power, dot};
    use crate::tensor::rank_one;

    fn hand_frame() -> VandermondeFrame {
        VandermondeFrame::new(2, 2, vec![0.0, 1.0, -1.0]).unwrap()
    }

    #[test]
    fn chebyshev_frames() {
        let f = default_frame(2, 2).unwrap();
        assert_eq!(f.len(), 3);
        assert!(f.nodes().iter().all(|&u| u > -1.0 && u < 1.0));
        assert!(f.conditioning_warning().is_none());
        assert_eq!(default_frame(2, 1).unwrap().len(), 1);
        for (m, n) in [(2, 2), (4, 2), (4, 3), (6, 3), (8, 3)] {
            let f = default_frame(m, n).unwrap();
            let v = GeneratingVector::new(m, n, vec![1.0; f.len()]).unwrap();
            assert!(decompose(&v, &f).is_ok());
        }
    }

    #[test]
    fn frame_validation() {
        assert!(matches!(
            VandermondeFrame::new(2, 2, vec![0.0, 1.0, 0.0]),
            Err(Error::DuplicateNodes { .. })
        ));
        assert!(VandermondeFrame::new(2, 2, vec![0.0, 1.0]).is_err());
        let close = VandermondeFrame::new(2, 2, vec![0.0, 1e-12, 1.0]).unwrap();
        assert!(close.conditioning_warning().is_some());
        let json = serde_json::to_string(&hand_frame()).unwrap();
        assert_eq!(json, r#"{"m":2,"n":2,"nodes":[0.0,1.0,-1.0]}"#);
        assert_eq!(
            serde_json::from_str::<VandermondeFrame>(&json).unwrap(),
            hand_frame()
        );
        assert!(serde_json::from_str::<VandermondeFrame>(r#"{"m":2,"n":2,"nodes":[1,1,0]}"#).is_err());
    }

    #[test]
    fn decompose_hand_example() {
        let gv = GeneratingVector::new(2, 2, vec![1.0, 0.0, 1.0]).unwrap();
        let c = decompose(&gv, &hand_frame()).unwrap();
        for (a, b) in c.alpha.iter().zip([0.0, 0.5, 0.5]) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(reconstruction_residual(&gv, &c, &hand_frame()).unwrap() < 1e-15);
    }

    #[test]
    fn columns_decompose_to_unit_vectors() {
        let f = default_frame(4, 3).unwrap();
        for j in 0..f.len() {
            let gv = GeneratingVector::new(4, 3, f.long_vector(j)).unwrap();
            let c = decompose(&gv, &f).unwrap();
            for (k, a) in c.alpha.iter().enumerate() {
                let e = if k == j { 1.0 } else { 0.0 };
                assert!((a - e).abs() < 1e-8, "j={j} k={k} a={a}");
            }
            let back = compose(&c, &f).unwrap();
            assert!(back
                .values()
                .iter()
                .zip(gv.values())
                .all(|(a, b)| (a - b).abs() < 1e-9));
        }
        let zero = GeneratingVector::zeros(4, 3).unwrap();
        assert!(decompose(&zero, &f).unwrap().alpha.iter().all(|&a| a == 0.0));
    }

    #[test]
    fn shape_errors() {
        let gv = GeneratingVector::new(4, 2, vec![0.0; 5]).unwrap();
        assert!(matches!(
            decompose(&gv, &hand_frame()),
            Err(Error::ShapeMismatch { .. })
        ));
        let c = VandermondeCoefficients { alpha: vec![1.0; 4] };
        assert!(compose(&c, &hand_frame()).is_err());
        assert!(ut_image(&[1.0], &hand_frame()).is_err());
        assert!(hsos_dual_map(&[1.0], &hand_frame()).is_err());
        let t = SymmetricTensor::zeros(2, 3).unwrap();
        assert!(dual_image_point(&t, &hand_frame()).is_err());
    }

    #[test]
    fn dual_image_of_identity() {
        let t = SymmetricTensor::from_coeffs(2, 2, vec![1.0, 0.0, 1.0]).unwrap();
        assert_eq!(dual_image_point(&t, &hand_frame()).unwrap(), vec![1.0, 2.0, 2.0]);
    }

    #[test]
    fn ut_image_hand_example() {
        let f = VandermondeFrame::new(2, 2, vec![2.0, 0.0, 1.0]).unwrap();
        let y = conv_power(&[1.0, 1.0], 2);
        assert_eq!(y, vec![1.0, 2.0, 1.0]);
        let img = ut_image(&y, &f).unwrap();
        assert_eq!(img[0], 9.0);
        assert_eq!(ut_image(&[0.0; 3], &f).unwrap(), vec![0.0; 3]);
        let direct = dual_image_point(&rank_one(&[1.0, 1.0], 2).to_symmetric(), &f).unwrap();
        assert_eq!(img, direct);
        assert_eq!(dot(&f.short_vector(0), &[1.0, 1.0]).powi(2), 9.0);
    }

    #[test]
    fn hsos_dual_map_examples() {
        let g = hsos_dual_map(&[1.0, 3.0, 1.0], &hand_frame()).unwrap();
        for (a, b) in g.iter().zip([1.0, 1.0, 1.0]) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(hsos_dual_map(&[0.0; 3], &hand_frame()).unwrap(), vec![0.0; 3]);

        let f = default_frame(6, 3).unwrap();
        let gamma: Vec<f64> = (0..f.len()).map(|i| (i as f64 * 0.37).cos()).collect();
        let beta = ut_image(&gamma, &f).unwrap();
        let back = hsos_dual_map(&beta, &f).unwrap();
        for (a, b) in back.iter().zip(&gamma) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn nonnegative_orthant_predicate() {
        assert!(VandermondeCoefficients {
            alpha: vec![0.0, 1.0]
        }
        .is_nonnegative());
        assert!(!VandermondeCoefficients {
            alpha: vec![-1e-3, 1.0]
        }
        .is_nonnegative());
    }
}
