//! Reference filters: Perona-Malik diffusion with a local gradient
//! diffusivity, and linear (heat equation) smoothing.

use crate::error::{Error, Result};
use crate::grid::{reflect_index, Image2D, Signal1D, SolverParams};
use crate::smoothing::{convolve, convolve_2d, discrete_gaussian_kernel, Boundary};
use crate::solver1d::{run_1d_with, step_with_diffusivity, Run1D};
use crate::solver2d::{euler_step_2d, run_2d_with, DiffusivityField2D, Run2D};

/// `1 / (1 + (s / lambda)^2)`
#[inline]
pub fn pm_diffusivity(s: f64, lambda: f64) -> f64 {
    1.0 / (1.0 + (s / lambda).powi(2))
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0) {
        return Err(Error::arg(format!("lambda must be positive, got {lambda}")));
    }
    Ok(())
}

/// Central-difference `|u'|` per sample, mirrored at the ends.
pub fn gradient_magnitude_1d(u: &Signal1D) -> Vec<f64> {
    let v = u.values();
    let n = v.len() as isize;
    (0..n)
        .map(|i| {
            let a = v[reflect_index(i - 1, n as usize)];
            let b = v[reflect_index(i + 1, n as usize)];
            (b - a).abs() / (2.0 * u.h())
        })
        .collect()
}

/// Central-difference `|grad u|` per pixel, mirrored at the border.
pub fn gradient_magnitude_2d(img: &Image2D) -> Vec<f64> {
    let (w, h) = (img.width(), img.height());
    let mut out = Vec::with_capacity(w * h);
    for y in 0..h as isize {
        for x in 0..w as isize {
            let gx = img.get(reflect_index(x + 1, w), y as usize) - img.get(reflect_index(x - 1, w), y as usize);
            let gy = img.get(x as usize, reflect_index(y + 1, h)) - img.get(x as usize, reflect_index(y - 1, h));
            out.push(0.5 * gx.hypot(gy));
        }
    }
    out
}

pub fn pm_diffusivity_1d(u: &Signal1D, lambda: f64) -> Result<Vec<f64>> {
    check_lambda(lambda)?;
    Ok(gradient_magnitude_1d(u)
        .into_iter()
        .map(|s| pm_diffusivity(s, lambda))
        .collect())
}

pub fn pm_diffusivity_2d(img: &Image2D, lambda: f64) -> Result<DiffusivityField2D> {
    check_lambda(lambda)?;
    let g = gradient_magnitude_2d(img)
        .into_iter()
        .map(|s| pm_diffusivity(s, lambda))
        .collect();
    DiffusivityField2D::new(img.width(), img.height(), g)
}

/// One semi-implicit Perona-Malik step, using the same matrix as the nonlocal
/// 1D solver.
pub fn perona_malik_step_1d(u: &Signal1D, lambda: f64, tau: f64) -> Result<Signal1D> {
    let g = pm_diffusivity_1d(u, lambda)?;
    step_with_diffusivity(u, &g, tau)
}

/// One explicit Perona-Malik step, using the same stencil as the nonlocal
/// 2D solver.
pub fn perona_malik_step_2d(u: &Image2D, lambda: f64, tau: f64) -> Result<Image2D> {
    let g = pm_diffusivity_2d(u, lambda)?;
    euler_step_2d(u, &g, tau)
}

pub fn run_pm_1d(
    input: &Signal1D,
    params: &SolverParams,
    lambda: f64,
    snapshot_stride: usize,
) -> Result<Run1D> {
    check_lambda(lambda)?;
    run_1d_with(input, params, snapshot_stride, |u| {
        perona_malik_step_1d(u, lambda, params.tau)
    })
}

pub fn run_pm_2d(
    input: &Image2D,
    params: &SolverParams,
    lambda: f64,
    snapshot_stride: usize,
) -> Result<Run2D> {
    check_lambda(lambda)?;
    run_2d_with(input, params, snapshot_stride, |_, u| pm_diffusivity_2d(u, lambda))
}

fn check_time(t_total: f64) -> Result<()> {
    if !(t_total >= 0.0 && t_total.is_finite()) {
        return Err(Error::arg(format!(
            "diffusion time must be nonnegative, got {t_total}"
        )));
    }
    Ok(())
}

/// Heat equation `u_t = u_xx` for time `t_total` (physical units): convolution
/// with the lattice Gaussian of variance `2 t / h^2` samples, mirrored at the
/// ends. Conserves the sample sum and composes exactly in time.
pub fn linear_diffusion_1d(u: &Signal1D, t_total: f64) -> Result<Signal1D> {
    check_time(t_total)?;
    let k = discrete_gaussian_kernel(2.0 * t_total / (u.h() * u.h()));
    Signal1D::new(convolve(u.values(), &k, Boundary::ReflectHalf), u.h())
}

/// Heat equation on an image for time `t_total` in pixel units.
pub fn linear_diffusion_2d(img: &Image2D, t_total: f64) -> Result<Image2D> {
    check_time(t_total)?;
    let k = discrete_gaussian_kernel(2.0 * t_total);
    let out = convolve_2d(img.pixels(), img.width(), img.height(), &k, Boundary::ReflectHalf);
    Image2D::new(img.width(), img.height(), out)
}
