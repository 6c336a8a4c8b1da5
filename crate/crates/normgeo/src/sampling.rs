//! Deterministic random sampling used by randomized checks and the
//! self-test battery.
//!
//! Everything is driven by `ChaCha8Rng` seeded explicitly, so identical
//! seeds produce identical streams on every platform.

use crate::scalar::{Mode, Scalar};
use crate::vector::Vector;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

pub fn gaussian_scalar(rng: &mut ChaCha8Rng, mode: Mode) -> Scalar {
    match mode {
        Mode::Real => Scalar::new(gaussian(rng), 0.0),
        Mode::Complex => Scalar::new(gaussian(rng), gaussian(rng)),
    }
}

pub fn gaussian_vector(rng: &mut ChaCha8Rng, dim: usize, mode: Mode) -> Vector {
    Vector::new((0..dim).map(|_| gaussian_scalar(rng, mode)).collect()).expect("dim >= 1")
}

pub fn gaussian_real_vec(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| gaussian(rng)).collect()
}

/// Uniform direction on the Euclidean unit sphere.
pub fn unit_vector(rng: &mut ChaCha8Rng, dim: usize, mode: Mode) -> Vector {
    loop {
        let v = gaussian_vector(rng, dim, mode);
        let n = v.norm2();
        if n > 1e-12 {
            return v.scale(Scalar::new(1.0 / n, 0.0));
        }
    }
}

pub fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..=hi)
}

pub fn uniform_index(rng: &mut ChaCha8Rng, n: usize) -> usize {
    rng.random_range(0..n)
}
