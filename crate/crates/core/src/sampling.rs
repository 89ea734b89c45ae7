//! Seeded random draws shared by the samplers.
//!
//! All randomness comes from ChaCha8 seeded with a `u64`. Independent workers
//! use separate ChaCha streams of the same seed, so a parallel run reproduces
//! the serial one exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Name of the generator, recorded in reports.
pub const GENERATOR: &str = "ChaCha8";

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for worker or trial `stream` under `seed`.
pub fn rng_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub fn normal_vec<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.sample(StandardNormal)).collect()
}

/// Uniform point on the unit sphere in `R^len`.
pub fn unit_vec<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<f64> {
    loop {
        let v = normal_vec(rng, len);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Uniform point on the probability simplex with `len` vertices.
///
/// The last weight absorbs the rounding error, so the weights sum to one up
/// to a single rounding.
pub fn simplex_weights<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<f64> {
    if len == 0 {
        return Vec::new();
    }
    let raw: Vec<f64> = (0..len).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total = kahan_sum(&raw);
    let mut w: Vec<f64> = raw.iter().map(|x| x / total).collect();
    let head = kahan_sum(&w[..len - 1]);
    w[len - 1] = (1.0 - head).max(0.0);
    w
}

/// Compensated summation.
pub fn kahan_sum(xs: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for &x in xs {
        let y = x - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}
