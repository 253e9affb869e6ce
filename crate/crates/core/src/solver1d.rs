//! Semi-implicit time stepping for the 1D nonlocal diffusion:
//! `(I - tau A(U^k)) U^{k+1} = U^k`, one tridiagonal solve per step.

use crate::error::{Error, Result};
use crate::grid::{Signal1D, SolverParams, Window1D};
use crate::metrics::{signal_stats, StepStats};
use crate::ratio1d::{edge_stop, ratio_field_1d};
use crate::smoothing::{convolve, gaussian_kernel, Boundary};

/// Tridiagonal matrix; `lower[i]` sits at `(i + 1, i)`, `upper[i]` at `(i, i + 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Tridiagonal {
    pub fn new(lower: Vec<f64>, diag: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        let n = diag.len();
        if n == 0 || lower.len() + 1 != n || upper.len() + 1 != n {
            return Err(Error::arg(format!(
                "inconsistent band lengths: lower {}, diag {n}, upper {}",
                lower.len(),
                upper.len()
            )));
        }
        Ok(Tridiagonal { lower, diag, upper })
    }

    pub fn identity(n: usize) -> Self {
        Tridiagonal {
            lower: vec![0.0; n.saturating_sub(1)],
            diag: vec![1.0; n],
            upper: vec![0.0; n.saturating_sub(1)],
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// First row violating strict diagonal dominance, if any.
    pub fn dominance_violation(&self) -> Option<usize> {
        (0..self.len()).find(|&i| {
            let off = if i > 0 { self.lower[i - 1].abs() } else { 0.0 }
                + self.upper.get(i).map_or(0.0, |v| v.abs());
            self.diag[i].abs() <= off
        })
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut acc = self.diag[i] * x[i];
                if i > 0 {
                    acc += self.lower[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    acc += self.upper[i] * x[i + 1];
                }
                acc
            })
            .collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.len();
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            m[i][i] = self.diag[i];
            if i + 1 < n {
                m[i][i + 1] = self.upper[i];
                m[i + 1][i] = self.lower[i];
            }
        }
        m
    }
}

/// Assemble `B = I - tau A` for node diffusivities `g` on spacing `h`.
///
/// Half-node diffusivities are arithmetic means of the node values. The two
/// boundary rows carry no flux through the outer edge, so every row and column
/// of `B` sums to one.
pub fn assemble_1d(g: &[f64], tau: f64, h: f64) -> Result<Tridiagonal> {
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(Error::arg(format!("tau must be nonnegative, got {tau}")));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::arg(format!("h must be positive, got {h}")));
    }
    let n = g.len();
    if n < 2 {
        return Err(Error::arg("need at least 2 nodes"));
    }
    let scale = tau / (2.0 * h * h);
    // Coupling across the edge between node i and i + 1: tau * gamma_i = tau * beta_{i+1}.
    let coupling: Vec<f64> = g.windows(2).map(|w| scale * (w[0] + w[1])).collect();
    let mut diag = vec![1.0; n];
    for (i, c) in coupling.iter().enumerate() {
        diag[i] += c;
        diag[i + 1] += c;
    }
    let off: Vec<f64> = coupling.iter().map(|c| -c).collect();
    Tridiagonal::new(off.clone(), diag, off)
}

/// Thomas algorithm without pivoting. Refuses matrices that are not strictly
/// diagonally dominant.
pub fn thomas_solve(m: &Tridiagonal, rhs: &[f64]) -> Result<Vec<f64>> {
    let n = m.len();
    if rhs.len() != n {
        return Err(Error::arg(format!(
            "right-hand side has {} entries for a {n}x{n} system",
            rhs.len()
        )));
    }
    if let Some(row) = m.dominance_violation() {
        return Err(Error::Numerical(format!(
            "row {row} is not strictly diagonally dominant"
        )));
    }
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut denom = m.diag[0];
    if n > 1 {
        c[0] = m.upper[0] / denom;
    }
    d[0] = rhs[0] / denom;
    for i in 1..n {
        denom = m.diag[i] - m.lower[i - 1] * c[i - 1];
        if i + 1 < n {
            c[i] = m.upper[i] / denom;
        }
        d[i] = (rhs[i] - m.lower[i - 1] * d[i - 1]) / denom;
    }
    let mut x = d;
    for i in (0..n - 1).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    Ok(x)
}

/// Gaussian presmoothing with standard deviation `sigma0` in samples.
pub fn gaussian_presmooth(u: &Signal1D, sigma0: f64) -> Signal1D {
    if sigma0 <= 0.0 {
        return u.clone();
    }
    let k = gaussian_kernel(sigma0);
    u.with_values(convolve(u.values(), &k, Boundary::Reflect))
}

/// One implicit step with a prescribed node diffusivity.
pub fn step_with_diffusivity(u: &Signal1D, g: &[f64], tau: f64) -> Result<Signal1D> {
    if g.len() != u.len() {
        return Err(Error::arg("diffusivity and signal lengths differ"));
    }
    let b = assemble_1d(g, tau, u.h())?;
    Ok(u.with_values(thomas_solve(&b, u.values())?))
}

/// Node diffusivity `g(R)` of the nonlocal model.
pub fn diffusivity_1d(u: &Signal1D, params: &SolverParams, w: Window1D) -> Result<Vec<f64>> {
    let r = ratio_field_1d(u, w, params.eps_tv)?;
    Ok(r.into_iter()
        .map(|s| edge_stop(&params.edge_stop, s))
        .collect())
}

pub fn step_1d(u: &Signal1D, params: &SolverParams, w: Window1D) -> Result<Signal1D> {
    let g = diffusivity_1d(u, params, w)?;
    step_with_diffusivity(u, &g, params.tau)
}

/// Result of a full 1D run.
#[derive(Debug, Clone)]
pub struct Run1D {
    pub output: Signal1D,
    /// `(step, state)` every `snapshot_stride` steps.
    pub snapshots: Vec<(usize, Signal1D)>,
    /// Diagnostics for step 0 (presmoothed input) through the last step.
    pub stats: Vec<StepStats>,
}

/// Presmooth once, then take `params.steps` implicit steps.
pub fn run_1d(
    input: &Signal1D,
    params: &SolverParams,
    w: Window1D,
    snapshot_stride: usize,
) -> Result<Run1D> {
    run_1d_with(input, params, snapshot_stride, |u| step_1d(u, params, w))
}

pub(crate) fn run_1d_with(
    input: &Signal1D,
    params: &SolverParams,
    snapshot_stride: usize,
    mut step: impl FnMut(&Signal1D) -> Result<Signal1D>,
) -> Result<Run1D> {
    params.validate()?;
    let mut u = gaussian_presmooth(input, params.sigma0);
    let mut stats = vec![signal_stats(0, u.values())];
    let mut snapshots = Vec::new();
    for k in 1..=params.steps {
        u = step(&u)?;
        stats.push(signal_stats(k, u.values()));
        if snapshot_stride > 0 && k % snapshot_stride == 0 {
            snapshots.push((k, u.clone()));
        }
    }
    Ok(Run1D {
        output: u,
        snapshots,
        stats,
    })
}
