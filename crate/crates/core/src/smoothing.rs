//! Symmetric convolution kernels and separable convolution with reflected
//! boundaries.

use crate::grid::{reflect_index, reflect_index_half};

/// Boundary extension used when a kernel reaches past either end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// Whole-sample mirror, `u[-k] = u[k]`.
    Reflect,
    /// Half-sample mirror, `u[-1] = u[0]`; conserves the plain sum under any
    /// normalized symmetric kernel.
    ReflectHalf,
}

/// Sampled Gaussian truncated at `4 sigma` and renormalized to unit sum.
/// Returns the half kernel `k[0..=r]` (`k[-j] = k[j]`). `sigma == 0` is the identity.
pub fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    if sigma <= 0.0 {
        return vec![1.0];
    }
    let radius = (4.0 * sigma).ceil() as usize;
    let mut k: Vec<f64> = (0..=radius)
        .map(|j| (-(j as f64).powi(2) / (2.0 * sigma * sigma)).exp())
        .collect();
    normalize_half_kernel(&mut k);
    k
}

/// Lattice heat kernel `e^{-t} I_n(t)` for variance `t`: the exact solution
/// operator of `du/dt = u[n+1] - 2u[n] + u[n-1]` after time `t / 2`. Unlike a
/// sampled Gaussian it composes exactly: `K(t1) * K(t2) = K(t1 + t2)`.
///
/// Computed by Miller's backward recurrence for the modified Bessel functions,
/// normalized with `I_0 + 2 sum I_n = e^t`. Tail entries below `1e-17` are dropped.
pub fn discrete_gaussian_kernel(variance: f64) -> Vec<f64> {
    if variance <= 0.0 {
        return vec![1.0];
    }
    let t = variance;
    let sd = t.sqrt();
    // Start far enough out that the recurrence has converged at the useful orders.
    let n_start = (t + 12.0 * sd + 40.0).ceil() as usize;
    let mut vals = vec![0.0f64; n_start + 2];
    vals[n_start] = 1e-300;
    for n in (1..=n_start).rev() {
        vals[n - 1] = vals[n + 1] + (2.0 * n as f64 / t) * vals[n];
        if vals[n - 1] > 1e250 {
            for v in vals.iter_mut().skip(n - 1) {
                *v *= 1e-250;
            }
        }
    }
    let norm = vals[0] + 2.0 * vals[1..].iter().sum::<f64>();
    let mut k: Vec<f64> = vals.iter().map(|v| v / norm).collect();
    while k.len() > 1 && *k.last().unwrap() < 1e-17 {
        k.pop();
    }
    k
}

fn normalize_half_kernel(k: &mut [f64]) {
    let sum = k[0] + 2.0 * k[1..].iter().sum::<f64>();
    k.iter_mut().for_each(|v| *v /= sum);
}

/// Convolve `src` with the symmetric half kernel `k`.
pub fn convolve(src: &[f64], k: &[f64], boundary: Boundary) -> Vec<f64> {
    let n = src.len();
    if k.len() == 1 {
        return src.iter().map(|v| v * k[0]).collect();
    }
    let idx = |i: isize| match boundary {
        Boundary::Reflect => reflect_index(i, n),
        Boundary::ReflectHalf => reflect_index_half(i, n),
    };
    let r = k.len() as isize - 1;
    (0..n as isize)
        .map(|i| {
            let mut acc = k[0] * src[i as usize];
            for j in 1..=r {
                acc += k[j as usize] * (src[idx(i - j)] + src[idx(i + j)]);
            }
            acc
        })
        .collect()
}

/// Separable 2D convolution of a row-major `width x height` buffer.
pub fn convolve_2d(
    src: &[f64],
    width: usize,
    height: usize,
    k: &[f64],
    boundary: Boundary,
) -> Vec<f64> {
    let mut tmp = Vec::with_capacity(src.len());
    for row in src.chunks_exact(width) {
        tmp.extend(convolve(row, k, boundary));
    }
    let mut out = vec![0.0; src.len()];
    let mut col = vec![0.0; height];
    for x in 0..width {
        for (y, c) in col.iter_mut().enumerate() {
            *c = tmp[y * width + x];
        }
        for (y, v) in convolve(&col, k, boundary).into_iter().enumerate() {
            out[y * width + x] = v;
        }
    }
    out
}
