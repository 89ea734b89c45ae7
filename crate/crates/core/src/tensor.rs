//! Symmetric and Hankel tensors in compressed exponent form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::{count_indices, enumerate_indices, multinomial, MultiIndex};

/// The generating vector `v` of an order-`m`, dimension-`n` Hankel tensor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGeneratingVector")]
pub struct GeneratingVector {
    m: usize,
    n: usize,
    v: Vec<f64>,
}

#[derive(Deserialize)]
struct RawGeneratingVector {
    m: usize,
    n: usize,
    v: Vec<f64>,
}

impl TryFrom<RawGeneratingVector> for GeneratingVector {
    type Error = Error;

    fn try_from(raw: RawGeneratingVector) -> Result<Self> {
        GeneratingVector::new(raw.m, raw.n, raw.v)
    }
}

/// Length `(n-1)m+1` of a generating vector.
pub fn generating_len(m: usize, n: usize) -> usize {
    (n - 1) * m + 1
}

impl GeneratingVector {
    pub fn new(m: usize, n: usize, v: Vec<f64>) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidArgument(format!(
                "order and dimension must be positive, got m={m} n={n}"
            )));
        }
        let expected = generating_len(m, n);
        if v.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: v.len(),
            });
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument(
                "generating vector has non-finite entries".into(),
            ));
        }
        Ok(Self { m, n, v })
    }

    pub fn zeros(m: usize, n: usize) -> Result<Self> {
        let len = if n == 0 { 0 } else { generating_len(m, n) };
        Self::new(m, n, vec![0.0; len])
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.v
    }

    pub fn into_values(self) -> Vec<f64> {
        self.v
    }

    pub fn require_even(&self) -> Result<()> {
        if self.m % 2 == 1 {
            return Err(Error::OddOrder(self.m));
        }
        Ok(())
    }
}

/// A symmetric tensor stored as one coefficient `a_α` per exponent vector of degree `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricTensor {
    m: usize,
    n: usize,
    coeffs: Vec<f64>,
}

impl SymmetricTensor {
    /// Builds a tensor from coefficients listed in canonical order.
    pub fn from_coeffs(m: usize, n: usize, coeffs: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        let expected = count_indices(m, n);
        if coeffs.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: coeffs.len(),
            });
        }
        Ok(Self { m, n, coeffs })
    }

    pub fn zeros(m: usize, n: usize) -> Result<Self> {
        Self::from_coeffs(m, n, vec![0.0; count_indices(m, n.max(1))])
    }

    /// Builds a tensor by evaluating `f` on every exponent vector.
    pub fn from_fn(m: usize, n: usize, f: impl FnMut(&MultiIndex) -> f64) -> Result<Self> {
        let coeffs = enumerate_indices(m, n).iter().map(f).collect();
        Self::from_coeffs(m, n, coeffs)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Coefficients in canonical order.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn get(&self, alpha: &MultiIndex) -> Result<f64> {
        if alpha.len() != self.n || alpha.degree() != self.m {
            return Err(Error::InvalidArgument(format!(
                "index {alpha} does not belong to a tensor with m={} n={}",
                self.m, self.n
            )));
        }
        Ok(self.coeffs[alpha.rank()])
    }

    /// `(α, a_α)` pairs in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (MultiIndex, f64)> + '_ {
        enumerate_indices(self.m, self.n)
            .into_iter()
            .zip(self.coeffs.iter().copied())
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, c| acc.max(c.abs()))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            m: self.m,
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            m: self.m,
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// `Σ_j w_j T_j`; all terms must share `(m, n)`.
    pub fn linear_combination(terms: &[(f64, &SymmetricTensor)]) -> Result<Self> {
        let (_, first) = terms
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty linear combination".into()))?;
        let mut coeffs = vec![0.0; first.coeffs.len()];
        for (w, t) in terms {
            first.check_same_shape(t)?;
            for (c, a) in coeffs.iter_mut().zip(&t.coeffs) {
                *c += w * a;
            }
        }
        Ok(Self {
            m: first.m,
            n: first.n,
            coeffs,
        })
    }

    pub(crate) fn check_shape(&self, m: usize, n: usize) -> Result<()> {
        if self.m != m || self.n != n {
            return Err(Error::ShapeMismatch {
                m,
                n,
                other_m: self.m,
                other_n: self.n,
            });
        }
        Ok(())
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        self.check_shape(other.m, other.n)
    }
}

#[derive(Serialize, Deserialize)]
struct CoeffEntry {
    alpha: MultiIndex,
    value: f64,
}

#[derive(Serialize, Deserialize)]
struct TensorJson {
    m: usize,
    n: usize,
    coeffs: Vec<CoeffEntry>,
}

impl Serialize for SymmetricTensor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TensorJson {
            m: self.m,
            n: self.n,
            coeffs: self
                .iter()
                .map(|(alpha, value)| CoeffEntry { alpha, value })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymmetricTensor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = TensorJson::deserialize(d)?;
        if raw.n == 0 {
            return Err(D::Error::custom("dimension must be positive"));
        }
        let count = count_indices(raw.m, raw.n);
        if raw.coeffs.len() != count {
            return Err(D::Error::custom(format!(
                "expected {count} coefficients, got {}",
                raw.coeffs.len()
            )));
        }
        let mut coeffs = vec![None; count];
        for entry in raw.coeffs {
            if entry.alpha.len() != raw.n || entry.alpha.degree() != raw.m {
                return Err(D::Error::custom(format!(
                    "index {} has wrong length or degree",
                    entry.alpha
                )));
            }
            let slot = &mut coeffs[entry.alpha.rank()];
            if slot.is_some() {
                return Err(D::Error::custom(format!("duplicate index {}", entry.alpha)));
            }
            *slot = Some(entry.value);
        }
        let coeffs = coeffs.into_iter().map(|c| c.expect("all slots filled")).collect();
        Ok(SymmetricTensor {
            m: raw.m,
            n: raw.n,
            coeffs,
        })
    }
}

/// The rank-one tensor `u^{⊗m}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankOneTensor {
    pub base: Vec<f64>,
    pub m: usize,
}

impl RankOneTensor {
    /// `a_α = Π_i u_i^{α_i}`.
    pub fn coefficient(&self, alpha: &MultiIndex) -> f64 {
        alpha.monomial(&self.base)
    }

    pub fn to_symmetric(&self) -> SymmetricTensor {
        SymmetricTensor::from_fn(self.m, self.base.len(), |a| self.coefficient(a))
            .expect("rank-one tensor has a valid shape")
    }
}

pub fn rank_one(u: &[f64], m: usize) -> RankOneTensor {
    RankOneTensor { base: u.to_vec(), m }
}

/// The Hankel tensor with generating vector `v`: `a_α = v_{Σ_i i·α_i}`.
pub fn hankel_to_symmetric(gv: &GeneratingVector) -> SymmetricTensor {
    let v = gv.values();
    SymmetricTensor::from_fn(gv.m(), gv.n(), |alpha| {
        let offset: usize = alpha
            .exponents()
            .iter()
            .enumerate()
            .map(|(i, &a)| i * a as usize)
            .sum();
        v[offset]
    })
    .expect("Hankel tensor has a valid shape")
}

/// Precomputed exponents and weights for repeated evaluation of forms of one shape.
#[derive(Debug, Clone)]
pub struct FormEvaluator {
    m: usize,
    n: usize,
    indices: Vec<MultiIndex>,
    weights: Vec<f64>,
}

impl FormEvaluator {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        let indices = enumerate_indices(m, n);
        let weights = indices
            .iter()
            .map(|a| multinomial(a).map(|c| c as f64))
            .collect::<Result<_>>()?;
        Ok(Self {
            m,
            n,
            indices,
            weights,
        })
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `Σ_α c_α a_α x^α`.
    pub fn eval(&self, t: &SymmetricTensor, x: &[f64]) -> Result<f64> {
        t.check_shape(self.m, self.n)?;
        self.eval_coeffs(t.coeffs(), x)
    }

    pub(crate) fn eval_coeffs(&self, coeffs: &[f64], x: &[f64]) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: x.len(),
            });
        }
        Ok(self
            .indices
            .iter()
            .zip(&self.weights)
            .zip(coeffs)
            .map(|((alpha, w), a)| w * a * alpha.monomial(x))
            .sum())
    }

    /// The weighted pairing `Σ_α c_α b_α a_α`.
    pub fn pairing(&self, b: &[f64], a: &[f64]) -> f64 {
        self.weights
            .iter()
            .zip(b.iter().zip(a))
            .map(|(w, (b, a))| w * b * a)
            .sum()
    }
}

/// Evaluates the form `A x^m = Σ_α c_α a_α x^α`.
pub fn eval_form(t: &SymmetricTensor, x: &[f64]) -> Result<f64> {
    FormEvaluator::new(t.m(), t.n())?.eval(t, x)
}

/// The weighted pairing `⟨b, a⟩ = Σ_α c_α b_α a_α` between tensors of the same shape.
pub fn weighted_pairing(b: &SymmetricTensor, a: &SymmetricTensor) -> Result<f64> {
    b.check_same_shape(a)?;
    Ok(FormEvaluator::new(a.m(), a.n())?.pairing(b.coeffs(), a.coeffs()))
}
