//! Quality metrics and per-step diagnostics.

use crate::error::{Error, Result};
use crate::tv2d::cell_tv;

/// Mean squared error between equally sized sample buffers.
pub fn mse(reference: &[f64], test: &[f64]) -> Result<f64> {
    if reference.len() != test.len() {
        return Err(Error::arg(format!(
            "shape mismatch: {} vs {} samples",
            reference.len(),
            test.len()
        )));
    }
    if reference.is_empty() {
        return Err(Error::arg("cannot compare empty buffers"));
    }
    let sum: f64 = reference
        .iter()
        .zip(test)
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok(sum / reference.len() as f64)
}

/// Peak signal-to-noise ratio in dB for data normalized to `peak`.
/// Identical inputs give `f64::INFINITY`.
pub fn psnr_with_peak(reference: &[f64], test: &[f64], peak: f64) -> Result<f64> {
    let e = mse(reference, test)?;
    if e == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (peak * peak / e).log10())
}

/// PSNR with peak 1, for images in `[0, 1]`.
pub fn psnr(reference: &[f64], test: &[f64]) -> Result<f64> {
    psnr_with_peak(reference, test, 1.0)
}

/// One row of the `step,mean,l2,tv` diagnostics table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepStats {
    pub step: usize,
    pub mean: f64,
    pub l2: f64,
    pub tv: f64,
}

fn mean_l2(values: &[f64]) -> (f64, f64) {
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let l2 = values.iter().map(|v| v * v).sum::<f64>().sqrt();
    (mean, l2)
}

pub fn signal_tv(values: &[f64]) -> f64 {
    values.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
}

/// Anisotropic TV of the bilinear interpolant over the whole image.
pub fn image_tv(pixels: &[f64], width: usize) -> f64 {
    let height = pixels.len() / width;
    let mut tv = 0.0;
    for y in 0..height.saturating_sub(1) {
        let r0 = &pixels[y * width..(y + 1) * width];
        let r1 = &pixels[(y + 1) * width..(y + 2) * width];
        for x in 0..width - 1 {
            tv += cell_tv(r0[x], r0[x + 1], r1[x], r1[x + 1]);
        }
    }
    tv
}

pub fn signal_stats(step: usize, values: &[f64]) -> StepStats {
    let (mean, l2) = mean_l2(values);
    StepStats {
        step,
        mean,
        l2,
        tv: signal_tv(values),
    }
}

pub fn image_stats(step: usize, pixels: &[f64], width: usize) -> StepStats {
    let (mean, l2) = mean_l2(pixels);
    StepStats {
        step,
        mean,
        l2,
        tv: image_tv(pixels, width),
    }
}

/// Population variance of `values`.
pub fn variance(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n
}
