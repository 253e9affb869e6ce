//! Value types shared by every filter: sampled signals, grayscale rasters,
//! window shapes, solver parameters and Neumann (mirror) padding.

use crate::error::{Error, Result};
use crate::ratio1d::EdgeStopSpec;

/// Uniformly sampled real signal with grid spacing `h`.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal1D {
    values: Vec<f64>,
    h: f64,
}

impl Signal1D {
    pub fn new(values: Vec<f64>, h: f64) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::arg(format!(
                "a signal needs at least 2 samples, got {}",
                values.len()
            )));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::arg(format!("grid spacing must be positive, got {h}")));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::arg(format!("sample {i} is not finite")));
        }
        Ok(Signal1D { values, h })
    }

    /// Signal on a unit grid (`h = 1`).
    pub fn unit(values: Vec<f64>) -> Result<Self> {
        Self::new(values, 1.0)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Same spacing, new samples. Used by the solvers, whose outputs keep the
    /// input length.
    pub(crate) fn with_values(&self, values: Vec<f64>) -> Signal1D {
        debug_assert_eq!(values.len(), self.values.len());
        Signal1D { values, h: self.h }
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Row-major grayscale raster. Pixel `(x, y)` lives at `y * width + x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Image2D {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
}

impl Image2D {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::arg("image dimensions must be positive"));
        }
        if width.checked_mul(height) != Some(pixels.len()) {
            return Err(Error::arg(format!(
                "{width}x{height} image needs {} pixels, got {}",
                width * height,
                pixels.len()
            )));
        }
        if let Some(i) = pixels.iter().position(|v| !v.is_finite()) {
            return Err(Error::arg(format!("pixel {i} is not finite")));
        }
        Ok(Image2D {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self::new(width, height, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<f64> {
        self.pixels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.pixels[y * self.width + x]
    }

    pub fn row(&self, y: usize) -> &[f64] {
        &self.pixels[y * self.width..(y + 1) * self.width]
    }

    pub fn min(&self) -> f64 {
        self.pixels.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.pixels.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn mean(&self) -> f64 {
        self.pixels.iter().sum::<f64>() / self.pixels.len() as f64
    }

    /// Sub-image `[x0, x0 + width) x [y0, y0 + height)`.
    pub fn crop(&self, x0: usize, y0: usize, width: usize, height: usize) -> Result<Image2D> {
        if x0 + width > self.width || y0 + height > self.height {
            return Err(Error::arg("crop rectangle exceeds the image"));
        }
        let mut pixels = Vec::with_capacity(width * height);
        for y in y0..y0 + height {
            pixels.extend_from_slice(&self.row(y)[x0..x0 + width]);
        }
        Image2D::new(width, height, pixels)
    }
}

/// Forward window of `len` samples used by the 1D ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window1D {
    pub len: usize,
}

impl Window1D {
    pub fn new(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::arg("window length must be at least 1"));
        }
        Ok(Window1D { len })
    }

    pub fn check(&self, signal_len: usize) -> Result<()> {
        if self.len >= signal_len {
            return Err(Error::arg(format!(
                "window length {} must be shorter than the signal ({signal_len} samples)",
                self.len
            )));
        }
        Ok(())
    }
}

/// Rectangle `Q = (-q1, q1) x (-q2, q2)` in pixels; `q1` runs along x (columns),
/// `q2` along y (rows).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window2D {
    pub q1: usize,
    pub q2: usize,
}

impl Window2D {
    pub fn new(q1: usize, q2: usize) -> Result<Self> {
        if q1 == 0 || q2 == 0 {
            return Err(Error::arg("window half-widths must be at least 1"));
        }
        Ok(Window2D { q1, q2 })
    }

    pub fn square(q: usize) -> Result<Self> {
        Self::new(q, q)
    }

    pub fn check(&self, width: usize, height: usize) -> Result<()> {
        if 2 * self.q1 >= width || 2 * self.q2 >= height {
            return Err(Error::arg(format!(
                "window ({}, {}) does not fit a {width}x{height} image",
                self.q1, self.q2
            )));
        }
        Ok(())
    }

    /// Number of unit cells covered by the window, `4 q1 q2`.
    pub fn cell_count(&self) -> usize {
        4 * self.q1 * self.q2
    }

    pub fn area(&self) -> f64 {
        self.cell_count() as f64
    }
}

/// Time stepping and diffusivity parameters common to the 1D and 2D solvers.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverParams {
    pub tau: f64,
    pub steps: usize,
    pub eps_tv: f64,
    pub edge_stop: EdgeStopSpec,
    /// Presmoothing standard deviation in samples (pixels).
    pub sigma0: f64,
}

impl SolverParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::arg(format!("tau must be positive, got {}", self.tau)));
        }
        if !(self.eps_tv > 0.0 && self.eps_tv.is_finite()) {
            return Err(Error::arg(format!(
                "eps_tv must be positive, got {}",
                self.eps_tv
            )));
        }
        if !(self.sigma0 >= 0.0 && self.sigma0.is_finite()) {
            return Err(Error::arg(format!(
                "sigma0 must be nonnegative, got {}",
                self.sigma0
            )));
        }
        self.edge_stop.validate()
    }
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            tau: 0.1,
            steps: 100,
            eps_tv: 1e-4,
            edge_stop: EdgeStopSpec::default(),
            sigma0: 0.0,
        }
    }
}

/// Whole-sample reflection of an arbitrary index into `0..n`
/// (`-k -> k`, `n - 1 + k -> n - 1 - k`), repeated as often as needed.
#[inline]
pub fn reflect_index(i: isize, n: usize) -> usize {
    if n == 1 {
        return 0;
    }
    let period = 2 * (n as isize - 1);
    let r = i.rem_euclid(period);
    if r < n as isize {
        r as usize
    } else {
        (period - r) as usize
    }
}

/// Half-sample reflection (`-1 -> 0`, `n -> n - 1`), repeated as often as needed.
/// This is the extension under which zero-flux boundaries conserve the plain sum.
#[inline]
pub fn reflect_index_half(i: isize, n: usize) -> usize {
    let period = 2 * n as isize;
    let r = i.rem_euclid(period);
    if r < n as isize {
        r as usize
    } else {
        (period - 1 - r) as usize
    }
}

/// Map integer samples in `[0, maxval]` to `[0, 1]`.
pub fn normalize(raw: &[u32], maxval: u32, width: usize, height: usize) -> Result<Image2D> {
    if maxval == 0 {
        return Err(Error::Format("maxval must be at least 1".into()));
    }
    if let Some((i, v)) = raw.iter().enumerate().find(|(_, &v)| v > maxval) {
        return Err(Error::Format(format!(
            "sample {i} has value {v} above maxval {maxval}"
        )));
    }
    let scale = maxval as f64;
    Image2D::new(width, height, raw.iter().map(|&v| v as f64 / scale).collect())
}

/// Inverse of [`normalize`]: round to the nearest level, clamping to `[0, maxval]`.
pub fn quantize(img: &Image2D, maxval: u32) -> Vec<u32> {
    let scale = maxval as f64;
    img.pixels()
        .iter()
        .map(|&p| (p * scale).round().clamp(0.0, scale) as u32)
        .collect()
}

/// Reflect `m` samples onto each end of `values`.
pub fn mirror_pad_1d(values: &[f64], m: usize) -> Result<Vec<f64>> {
    let n = values.len();
    if m >= n {
        return Err(Error::arg(format!(
            "padding margin {m} must be smaller than the signal length {n}"
        )));
    }
    let mut out = Vec::with_capacity(n + 2 * m);
    out.extend((1..=m).rev().map(|k| values[k]));
    out.extend_from_slice(values);
    out.extend((1..=m).map(|k| values[n - 1 - k]));
    Ok(out)
}

/// [`mirror_pad_1d`] on a [`Signal1D`].
pub fn mirror_pad_signal(u: &Signal1D, m: usize) -> Result<Signal1D> {
    Signal1D::new(mirror_pad_1d(u.values(), m)?, u.h())
}

/// Reflect `q1` columns onto the left/right and `q2` rows onto the top/bottom.
pub fn mirror_pad_2d(img: &Image2D, q1: usize, q2: usize) -> Result<Image2D> {
    let (w, h) = (img.width(), img.height());
    if q1 >= w || q2 >= h {
        return Err(Error::arg(format!(
            "padding ({q1}, {q2}) must be smaller than the image ({w}x{h})"
        )));
    }
    let pw = w + 2 * q1;
    let ph = h + 2 * q2;
    let mut pixels = Vec::with_capacity(pw * ph);
    for py in 0..ph {
        let y = reflect_index(py as isize - q2 as isize, h);
        let row = img.row(y);
        for px in 0..pw {
            pixels.push(row[reflect_index(px as isize - q1 as isize, w)]);
        }
    }
    Image2D::new(pw, ph, pixels)
}
