//! Seeded sampling. Every trial owns a ChaCha stream derived from (seed, trial).

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basis::CoefficientVector;

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Magnitude log-uniform in [1e-3, 1].
pub fn log_uniform_magnitude<R: Rng>(rng: &mut R) -> f64 {
    10f64.powf(-3.0 * rng.random::<f64>())
}

pub fn random_sign<R: Rng>(rng: &mut R) -> f64 {
    if rng.random::<bool>() {
        1.0
    } else {
        -1.0
    }
}

/// `size` distinct indices from [1, range], sorted.
pub fn random_subset<R: Rng>(rng: &mut R, range: u64, size: usize) -> Vec<u64> {
    let mut v: Vec<u64> = index::sample(rng, range as usize, size)
        .into_iter()
        .map(|i| i as u64 + 1)
        .collect();
    v.sort_unstable();
    v
}

/// Support size uniform in [1, max_support], positions uniform in [1, max_support],
/// log-uniform magnitudes and uniform signs.
pub fn random_coefficients<R: Rng>(rng: &mut R, max_support: u64) -> CoefficientVector<f64> {
    let size = rng.random_range(1..=max_support) as usize;
    random_subset(rng, max_support, size)
        .into_iter()
        .map(|k| (k, random_sign(rng) * log_uniform_magnitude(rng)))
        .collect()
}
