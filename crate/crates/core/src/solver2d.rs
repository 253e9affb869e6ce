//! Explicit time stepping of `u_t = div(g grad u)` on images.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{Image2D, SolverParams, Window2D};
use crate::harmonic::{
    boundary_tables, build_basis, RatioSolver2D, DEFAULT_BOUNDARY_MESH, DEFAULT_MODES,
};
use crate::metrics::{image_stats, StepStats};
use crate::ratio1d::{edge_stop, EdgeStopSpec};
use crate::smoothing::{convolve_2d, gaussian_kernel, Boundary};

/// Largest `tau * max g` accepted by [`euler_step_2d`].
pub const STABILITY_LIMIT: f64 = 0.25;

/// Central-difference gradient at interior pixel `(x, y)`.
pub fn gradient_2d(img: &Image2D, x: usize, y: usize) -> Result<[f64; 2]> {
    if x == 0 || y == 0 || x + 1 >= img.width() || y + 1 >= img.height() {
        return Err(Error::arg(format!(
            "pixel ({x}, {y}) has no central-difference neighbors in a {}x{} image",
            img.width(),
            img.height()
        )));
    }
    Ok([
        0.5 * (img.get(x + 1, y) - img.get(x - 1, y)),
        0.5 * (img.get(x, y + 1) - img.get(x, y - 1)),
    ])
}

/// Per-pixel diffusivity.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffusivityField2D {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

impl DiffusivityField2D {
    pub fn new(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != width * height {
            return Err(Error::arg(format!(
                "{} diffusivity values for a {width}x{height} grid",
                values.len()
            )));
        }
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::arg("diffusivity must be finite and nonnegative"));
        }
        Ok(DiffusivityField2D {
            width,
            height,
            values,
        })
    }

    pub fn constant(width: usize, height: usize, g: f64) -> Result<Self> {
        Self::new(width, height, vec![g; width * height])
    }

    /// `g(R)` through the edge-stopping function.
    pub fn from_ratio(width: usize, height: usize, ratio: &[f64], spec: &EdgeStopSpec) -> Result<Self> {
        Self::new(width, height, ratio.iter().map(|&r| edge_stop(spec, r)).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// One forward Euler step in conservative flux form. The flux between
/// neighbors uses the mean of their diffusivities and vanishes across the
/// image border (the reflected neighbor equals the pixel itself), so the
/// pixel sum is preserved. Requires `tau * max g <= 1/4`, which makes every
/// update a convex combination of neighboring values.
pub fn euler_step_2d(u: &Image2D, g: &DiffusivityField2D, tau: f64) -> Result<Image2D> {
    let (w, h) = (u.width(), u.height());
    if (g.width, g.height) != (w, h) {
        return Err(Error::arg(format!(
            "diffusivity is {}x{} but the image is {w}x{h}",
            g.width, g.height
        )));
    }
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(Error::arg(format!("tau must be nonnegative, got {tau}")));
    }
    let gmax = g.max();
    if tau * gmax > STABILITY_LIMIT * (1.0 + 1e-12) {
        return Err(Error::arg(format!(
            "tau = {tau} violates the stability bound tau <= {} for max g = {gmax}",
            STABILITY_LIMIT / gmax
        )));
    }
    let p = u.pixels();
    let gv = &g.values;
    let mut out = p.to_vec();
    // Horizontal fluxes.
    for y in 0..h {
        let row = y * w;
        for x in 0..w - 1 {
            let i = row + x;
            let flux = 0.5 * (gv[i] + gv[i + 1]) * (p[i + 1] - p[i]);
            out[i] += tau * flux;
            out[i + 1] -= tau * flux;
        }
    }
    // Vertical fluxes.
    for y in 0..h - 1 {
        for x in 0..w {
            let i = y * w + x;
            let j = i + w;
            let flux = 0.5 * (gv[i] + gv[j]) * (p[j] - p[i]);
            out[i] += tau * flux;
            out[j] -= tau * flux;
        }
    }
    Image2D::new(w, h, out)
}

/// Gaussian presmoothing with standard deviation `sigma0` in pixels. The
/// half-sample mirror keeps the pixel sum unchanged.
pub fn presmooth_2d(img: &Image2D, sigma0: f64) -> Image2D {
    if sigma0 <= 0.0 {
        return img.clone();
    }
    let k = gaussian_kernel(sigma0);
    let out = convolve_2d(img.pixels(), img.width(), img.height(), &k, Boundary::ReflectHalf);
    Image2D::new(img.width(), img.height(), out).expect("convolution preserves the shape")
}

/// Window and harmonic discretization of the 2D model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Config2D {
    pub window: Window2D,
    /// Highest sin/sinh wavenumber `M`.
    pub modes: usize,
    /// Number of boundary mesh points `L`.
    pub boundary_mesh: usize,
    /// Recompute the ratio field every this many steps.
    pub refresh_every: usize,
}

impl Default for Config2D {
    fn default() -> Self {
        Config2D {
            window: Window2D { q1: 2, q2: 2 },
            modes: DEFAULT_MODES,
            boundary_mesh: DEFAULT_BOUNDARY_MESH,
            refresh_every: 1,
        }
    }
}

/// Result of a full 2D run.
#[derive(Debug, Clone)]
pub struct Run2D {
    pub output: Image2D,
    pub snapshots: Vec<(usize, Image2D)>,
    /// Diagnostics for step 0 (presmoothed input) through the last step.
    pub stats: Vec<StepStats>,
    /// Ratio values clamped into `[0, 1]`, summed over all refreshes.
    pub clamp_events: usize,
    pub pivots: usize,
}

/// Presmooth, then take `params.steps` explicit steps of the nonlocal model.
pub fn run_2d(
    img: &Image2D,
    params: &SolverParams,
    cfg: &Config2D,
    snapshot_stride: usize,
) -> Result<Run2D> {
    params.validate()?;
    if cfg.refresh_every == 0 {
        return Err(Error::arg("refresh interval must be at least 1"));
    }
    cfg.window.check(img.width(), img.height())?;
    let tables = boundary_tables(&build_basis(cfg.window, cfg.modes), cfg.boundary_mesh)?;
    let mut solver = RatioSolver2D::new(Arc::new(tables));
    let mut clamp_events = 0;
    let mut pivots = 0;
    let mut g: Option<DiffusivityField2D> = None;
    let mut run = run_2d_with(img, params, snapshot_stride, |k, u| {
        if g.is_none() || (k - 1) % cfg.refresh_every == 0 {
            let r = solver.ratio_field(u, params.eps_tv)?;
            clamp_events += r.clamp_events;
            pivots += r.pivots;
            g = Some(DiffusivityField2D::from_ratio(
                r.width,
                r.height,
                &r.values,
                &params.edge_stop,
            )?);
        }
        Ok(g.clone().expect("diffusivity computed above"))
    })?;
    run.clamp_events = clamp_events;
    run.pivots = pivots;
    Ok(run)
}

/// Time loop shared by the 2D filters; `diffusivity(k, u)` supplies the field
/// for step `k` (1-based) from the current state.
pub(crate) fn run_2d_with(
    img: &Image2D,
    params: &SolverParams,
    snapshot_stride: usize,
    mut diffusivity: impl FnMut(usize, &Image2D) -> Result<DiffusivityField2D>,
) -> Result<Run2D> {
    params.validate()?;
    let mut u = presmooth_2d(img, params.sigma0);
    let mut stats = vec![image_stats(0, u.pixels(), u.width())];
    let mut snapshots = Vec::new();
    for k in 1..=params.steps {
        let g = diffusivity(k, &u)?;
        u = euler_step_2d(&u, &g, params.tau)?;
        stats.push(image_stats(k, u.pixels(), u.width()));
        if snapshot_stride > 0 && k % snapshot_stride == 0 {
            snapshots.push((k, u.clone()));
        }
    }
    Ok(Run2D {
        output: u,
        snapshots,
        stats,
        clamp_events: 0,
        pivots: 0,
    })
}
