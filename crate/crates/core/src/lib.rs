//! Cone geometry of Hankel forms.
//!
//! A Hankel tensor of order `m` and dimension `n` is determined by its
//! generating vector `v ∈ R^{(n-1)m+1}`, and its form is `v • x^{*m}`. This
//! crate evaluates such forms, decomposes Hankel tensors over Vandermonde
//! nodes, decides SOS membership through a Gram-matrix feasibility problem,
//! and samples the PSD, SOS and convolution cones together with their duals.

pub mod config;
pub mod convolution;
pub mod error;
pub mod index;
pub mod linalg;
pub mod psd;
pub mod sampling;
pub mod sos;
pub mod tensor;
pub mod vandermonde;

pub use config::SolverConfig;
pub use error::{Error, Result};
