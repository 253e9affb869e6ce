//! Local variation, total variation and their ratio over a forward window,
//! plus the edge-stopping map from ratio to diffusivity.

use crate::error::{Error, Result};
use crate::grid::{mirror_pad_1d, Signal1D, Window1D};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeStopForm {
    /// `eps_g + (1 - eps_g) (1 - s^2)^2`
    Polynomial,
    /// `1 / (1 + (s / lambda)^2)` rescaled so that `g(0) = 1`, `g(1) = eps_g`.
    PeronaMalik,
}

/// Nonincreasing diffusivity on `[0, 1]` with `g(0) = 1` and `g(1) = eps_g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeStopSpec {
    pub form: EdgeStopForm,
    pub eps_g: f64,
    pub lambda: f64,
}

impl Default for EdgeStopSpec {
    fn default() -> Self {
        EdgeStopSpec {
            form: EdgeStopForm::Polynomial,
            eps_g: 0.05,
            lambda: 0.1,
        }
    }
}

impl EdgeStopSpec {
    pub fn polynomial(eps_g: f64) -> Self {
        EdgeStopSpec {
            form: EdgeStopForm::Polynomial,
            eps_g,
            ..Default::default()
        }
    }

    pub fn perona_malik(eps_g: f64, lambda: f64) -> Self {
        EdgeStopSpec {
            form: EdgeStopForm::PeronaMalik,
            eps_g,
            lambda,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps_g > 0.0 && self.eps_g < 1.0) {
            return Err(Error::arg(format!(
                "eps_g must lie in (0, 1), got {}",
                self.eps_g
            )));
        }
        if self.form == EdgeStopForm::PeronaMalik && !(self.lambda > 0.0 && self.lambda.is_finite())
        {
            return Err(Error::arg(format!(
                "lambda must be positive, got {}",
                self.lambda
            )));
        }
        Ok(())
    }

    /// Diffusivity for ratio `s`; `s` is clamped into `[0, 1]`.
    pub fn eval(&self, s: f64) -> f64 {
        edge_stop(self, s)
    }
}

pub fn edge_stop(spec: &EdgeStopSpec, s: f64) -> f64 {
    let s = if s.is_nan() { 0.0 } else { s.clamp(0.0, 1.0) };
    let eps = spec.eps_g;
    match spec.form {
        EdgeStopForm::Polynomial => {
            let t = 1.0 - s * s;
            eps + (1.0 - eps) * t * t
        }
        EdgeStopForm::PeronaMalik => {
            let phi = |x: f64| 1.0 / (1.0 + (x / spec.lambda).powi(2));
            let phi1 = phi(1.0);
            eps + (1.0 - eps) * (phi(s) - phi1) / (1.0 - phi1)
        }
    }
}

fn check_window(u: &[f64], i: usize, l: usize) -> Result<()> {
    if i.checked_add(l).is_none_or(|end| end >= u.len()) {
        return Err(Error::arg(format!(
            "window [{i}, {i}+{l}] exceeds a signal of {} samples",
            u.len()
        )));
    }
    Ok(())
}

/// `|u[i + l] - u[i]|`
pub fn local_variation_1d(u: &[f64], i: usize, l: usize) -> Result<f64> {
    check_window(u, i, l)?;
    Ok((u[i + l] - u[i]).abs())
}

/// `sum_{j < l} |u[i + j + 1] - u[i + j]|`
pub fn total_variation_1d(u: &[f64], i: usize, l: usize) -> Result<f64> {
    check_window(u, i, l)?;
    Ok(u[i..=i + l].windows(2).map(|w| (w[1] - w[0]).abs()).sum())
}

/// `R[i] = LV_i / (eps_tv + TV_i)` on the forward window `[i, i + l]`, with the
/// signal mirrored past its right end so every sample has a full window.
pub fn ratio_field_1d(u: &Signal1D, w: Window1D, eps_tv: f64) -> Result<Vec<f64>> {
    if !(eps_tv > 0.0) {
        return Err(Error::arg(format!("eps_tv must be positive, got {eps_tv}")));
    }
    w.check(u.len())?;
    let n = u.len();
    let l = w.len;
    let padded = mirror_pad_1d(u.values(), l)?;
    // padded[l + i] == u[i]; only the right margin is ever read.
    let ext = &padded[l..];
    let diffs: Vec<f64> = ext.windows(2).map(|p| (p[1] - p[0]).abs()).collect();
    let out = (0..n)
        .map(|i| {
            let lv = (ext[i + l] - ext[i]).abs();
            let tv: f64 = diffs[i..i + l].iter().sum();
            lv / (eps_tv + tv)
        })
        .collect();
    Ok(out)
}
