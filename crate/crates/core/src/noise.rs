//! Seeded additive white Gaussian noise.
//!
//! Samples come from `ChaCha8Rng::seed_from_u64(seed)` (rand_chacha 0.9)
//! through `rand_distr::StandardNormal` (ziggurat, rand_distr 0.5). Both are
//! platform independent, so a seed fixes the noise everywhere.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::grid::{Image2D, Signal1D};

/// `sigma * N(0, 1)` samples, `n` of them.
pub fn gaussian_samples(n: usize, sigma: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut rng);
            sigma * z
        })
        .collect()
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::arg(format!(
            "noise level must be nonnegative, got {sigma}"
        )));
    }
    Ok(())
}

pub fn add_awgn(data: &[f64], sigma: f64, seed: u64) -> Result<Vec<f64>> {
    check_sigma(sigma)?;
    if sigma == 0.0 {
        return Ok(data.to_vec());
    }
    let noise = gaussian_samples(data.len(), sigma, seed);
    Ok(data.iter().zip(noise).map(|(d, n)| d + n).collect())
}

pub fn add_awgn_signal(u: &Signal1D, sigma: f64, seed: u64) -> Result<Signal1D> {
    Signal1D::new(add_awgn(u.values(), sigma, seed)?, u.h())
}

/// Noisy image clamped to `[0, 1]`.
pub fn add_awgn_image(img: &Image2D, sigma: f64, seed: u64) -> Result<Image2D> {
    let noisy = add_awgn(img.pixels(), sigma, seed)?
        .into_iter()
        .map(|v| v.clamp(0.0, 1.0))
        .collect();
    Image2D::new(img.width(), img.height(), noisy)
}
