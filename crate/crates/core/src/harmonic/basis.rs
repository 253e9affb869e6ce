//! Truncated basis of harmonic functions on the window rectangle.

use std::f64::consts::PI;

use crate::grid::Window2D;

/// One basis element on `Q = (-q1, q1) x (-q2, q2)`. With `a = 2 q1`,
/// `b = 2 q2`, `rho = b / a` and rescaled coordinates `s = (x + q1) / a`,
/// `t = (y + q2) / b` in `[0, 1]`:
///
/// | mode        | function                                  |
/// |-------------|-------------------------------------------|
/// | `S`         | `s`                                       |
/// | `T`         | `t`                                       |
/// | `ST`        | `s t`                                     |
/// | `Bottom(k)` | `sin(k pi s) sinh(k pi rho (1 - t))`      |
/// | `Right(k)`  | `sin(k pi t) sinh(k pi s / rho)`          |
/// | `Top(k)`    | `sin(k pi s) sinh(k pi rho t)`            |
/// | `Left(k)`   | `sin(k pi t) sinh(k pi (1 - s) / rho)`    |
///
/// Each sinh profile is divided by `cosh` of its largest argument so values
/// stay bounded for any `k` and aspect ratio. The name of a sin/sinh mode is
/// the edge where it does not vanish.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    S,
    T,
    ST,
    Bottom(usize),
    Right(usize),
    Top(usize),
    Left(usize),
}

/// `sinh(z) / cosh(zmax)` and `cosh(z) / cosh(zmax)` for `0 <= z <= zmax`.
#[inline]
fn damped(z: f64, zmax: f64) -> (f64, f64) {
    let denom = 1.0 + (-2.0 * zmax).exp();
    let up = (z - zmax).exp();
    let down = (-z - zmax).exp();
    ((up - down) / denom, (up + down) / denom)
}

/// The `4M + 3` functions `x, y, xy` (affinely rescaled) followed by four
/// sin/sinh families for each `k = 1..=M`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicBasis {
    window: Window2D,
    modes: Vec<Mode>,
}

pub fn build_basis(w: Window2D, m: usize) -> HarmonicBasis {
    let mut modes = vec![Mode::S, Mode::T, Mode::ST];
    for k in 1..=m {
        modes.extend([Mode::Bottom(k), Mode::Right(k), Mode::Top(k), Mode::Left(k)]);
    }
    HarmonicBasis { window: w, modes }
}

impl HarmonicBasis {
    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn window(&self) -> Window2D {
        self.window
    }

    /// Highest wavenumber `M`.
    pub fn max_mode(&self) -> usize {
        (self.modes.len() - 3) / 4
    }

    fn frame(&self, x: f64, y: f64) -> (f64, f64, f64, f64, f64) {
        let a = 2.0 * self.window.q1 as f64;
        let b = 2.0 * self.window.q2 as f64;
        (
            (x + self.window.q1 as f64) / a,
            (y + self.window.q2 as f64) / b,
            a,
            b,
            b / a,
        )
    }

    /// Value of basis function `h` at `(x, y)`, relative to the window center.
    pub fn value(&self, h: usize, x: f64, y: f64) -> f64 {
        let (s, t, _, _, rho) = self.frame(x, y);
        match self.modes[h] {
            Mode::S => s,
            Mode::T => t,
            Mode::ST => s * t,
            Mode::Bottom(k) => {
                let kp = k as f64 * PI;
                (kp * s).sin() * damped(kp * rho * (1.0 - t), kp * rho).0
            }
            Mode::Right(k) => {
                let kp = k as f64 * PI;
                (kp * t).sin() * damped(kp * s / rho, kp / rho).0
            }
            Mode::Top(k) => {
                let kp = k as f64 * PI;
                (kp * s).sin() * damped(kp * rho * t, kp * rho).0
            }
            Mode::Left(k) => {
                let kp = k as f64 * PI;
                (kp * t).sin() * damped(kp * (1.0 - s) / rho, kp / rho).0
            }
        }
    }

    /// Gradient of basis function `h` with respect to `(x, y)`.
    pub fn gradient(&self, h: usize, x: f64, y: f64) -> [f64; 2] {
        let (s, t, a, b, rho) = self.frame(x, y);
        match self.modes[h] {
            Mode::S => [1.0 / a, 0.0],
            Mode::T => [0.0, 1.0 / b],
            Mode::ST => [t / a, s / b],
            Mode::Bottom(k) => {
                let kp = k as f64 * PI;
                let (sh, ch) = damped(kp * rho * (1.0 - t), kp * rho);
                let w = kp / a;
                [w * (kp * s).cos() * sh, -w * (kp * s).sin() * ch]
            }
            Mode::Right(k) => {
                let kp = k as f64 * PI;
                let (sh, ch) = damped(kp * s / rho, kp / rho);
                let w = kp / b;
                [w * (kp * t).sin() * ch, w * (kp * t).cos() * sh]
            }
            Mode::Top(k) => {
                let kp = k as f64 * PI;
                let (sh, ch) = damped(kp * rho * t, kp * rho);
                let w = kp / a;
                [w * (kp * s).cos() * sh, w * (kp * s).sin() * ch]
            }
            Mode::Left(k) => {
                let kp = k as f64 * PI;
                let (sh, ch) = damped(kp * (1.0 - s) / rho, kp / rho);
                let w = kp / b;
                [-w * (kp * t).sin() * ch, w * (kp * t).cos() * sh]
            }
        }
    }
}
