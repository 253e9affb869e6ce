//! Synthetic signals and images with known ground truth.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::{Image2D, Signal1D};
use crate::noise::{add_awgn_image, add_awgn_signal};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynthKind {
    Piecewise,
    SpikeTrain,
    StepEdge,
    TestCard,
}

impl FromStr for SynthKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "piecewise" => Ok(SynthKind::Piecewise),
            "spiketrain" => Ok(SynthKind::SpikeTrain),
            "stepedge" => Ok(SynthKind::StepEdge),
            "testcard" => Ok(SynthKind::TestCard),
            other => Err(Error::arg(format!(
                "unknown synthetic kind {other:?} (expected piecewise, spiketrain, stepedge or testcard)"
            ))),
        }
    }
}

impl SynthKind {
    pub fn is_image(self) -> bool {
        matches!(self, SynthKind::StepEdge | SynthKind::TestCard)
    }
}

/// Clean signal and its noisy copy.
#[derive(Debug, Clone, PartialEq)]
pub struct Synth1D {
    pub truth: Signal1D,
    pub noisy: Signal1D,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Synth2D {
    pub truth: Image2D,
    pub noisy: Image2D,
}

/// Equal-length plateaus at the given levels.
pub fn piecewise_constant(n: usize, levels: &[f64], h: f64) -> Result<Signal1D> {
    if levels.is_empty() || n < levels.len() {
        return Err(Error::arg(format!(
            "{n} samples cannot hold {} plateaus",
            levels.len()
        )));
    }
    let values = (0..n).map(|i| levels[i * levels.len() / n]).collect();
    Signal1D::new(values, h)
}

pub fn piecewise(n: usize, levels: &[f64], h: f64, noise: f64, seed: u64) -> Result<Synth1D> {
    let truth = piecewise_constant(n, levels, h)?;
    let noisy = add_awgn_signal(&truth, noise, seed)?;
    Ok(Synth1D { truth, noisy })
}

/// Train of events with a linear rise over `rise` samples followed by an
/// exponential decay with time constant `decay` samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpikeTrain {
    pub len: usize,
    pub h: f64,
    pub events: usize,
    pub rise: usize,
    pub decay: f64,
    pub amplitude: f64,
    pub noise: f64,
}

impl Default for SpikeTrain {
    fn default() -> Self {
        SpikeTrain {
            len: 1200,
            h: 1.0,
            events: 8,
            rise: 4,
            decay: 3.0,
            amplitude: 1.0,
            noise: 0.25,
        }
    }
}

impl SpikeTrain {
    /// Event onsets, evenly spread with a seeded jitter of a quarter spacing.
    pub fn onsets(&self, seed: u64) -> Vec<usize> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spacing = self.len / (self.events + 1);
        (1..=self.events)
            .map(|k| {
                let quarter = (spacing / 4) as i64;
                let jitter = rng.random_range(-quarter..=quarter);
                (k as i64 * spacing as i64 + jitter) as usize
            })
            .collect()
    }

    /// Noise-free train.
    pub fn clean(&self, seed: u64) -> Result<Signal1D> {
        if self.events == 0 || self.rise == 0 || !(self.decay > 0.0) {
            return Err(Error::arg("spike train needs events, a rise and a decay"));
        }
        if self.len < 4 * (self.events + 1) {
            return Err(Error::arg("spike train is too short for its events"));
        }
        let mut values = vec![0.0; self.len];
        for onset in self.onsets(seed) {
            for (k, v) in values.iter_mut().enumerate().skip(onset) {
                let dt = k - onset;
                let shape = if dt < self.rise {
                    (dt + 1) as f64 / self.rise as f64
                } else {
                    (-((dt + 1 - self.rise) as f64) / self.decay).exp()
                };
                *v += self.amplitude * shape;
            }
        }
        Signal1D::new(values, self.h)
    }

    /// Samples from onset until the event falls below 1% of its amplitude.
    pub fn width(&self) -> f64 {
        self.rise as f64 + self.decay * 100f64.ln()
    }

    /// Peak sample index of each event.
    pub fn peaks(&self, seed: u64) -> Vec<usize> {
        self.onsets(seed).into_iter().map(|o| o + self.rise - 1).collect()
    }

    pub fn generate(&self, seed: u64) -> Result<Synth1D> {
        let truth = self.clean(seed)?;
        // distinct stream from the event placement
        let noisy = add_awgn_signal(&truth, self.noise, seed.wrapping_add(0x9e37_79b9))?;
        Ok(Synth1D { truth, noisy })
    }
}

/// Vertical edge at column `width / 2`: `low` to the left, `high` from there on.
pub fn step_edge(width: usize, height: usize, low: f64, high: f64, noise: f64, seed: u64) -> Result<Synth2D> {
    let truth = Image2D::from_fn(width, height, |x, _| if x < width / 2 { low } else { high })?;
    let noisy = add_awgn_image(&truth, noise, seed)?;
    Ok(Synth2D { truth, noisy })
}

/// Axis-aligned pixel rectangle `[x0, x1) x [y0, y1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rect {
    pub x0: usize,
    pub y0: usize,
    pub x1: usize,
    pub y1: usize,
}

impl Rect {
    pub fn contains(&self, x: usize, y: usize) -> bool {
        x >= self.x0 && x < self.x1 && y >= self.y0 && y < self.y1
    }

    /// Shrink by `m` pixels on every side.
    pub fn inset(&self, m: usize) -> Rect {
        Rect {
            x0: self.x0 + m,
            y0: self.y0 + m,
            x1: self.x1.saturating_sub(m),
            y1: self.y1.saturating_sub(m),
        }
    }

    pub fn pixels<'a>(&self, img: &'a Image2D) -> impl Iterator<Item = f64> + 'a {
        let r = *self;
        (r.y0..r.y1).flat_map(move |y| (r.x0..r.x1).map(move |x| img.get(x, y)))
    }
}

/// Geometry of the `n x n` test card.
///
/// Top half: background with a bright square and a textured square. Bottom
/// half: a vertical step between two flat levels.
#[derive(Debug, Clone, PartialEq)]
pub struct TestCard {
    pub size: usize,
    pub background: f64,
    pub square: Rect,
    pub square_level: f64,
    pub texture: Rect,
    pub step_rows: (usize, usize),
    pub step_column: usize,
    pub step_low: f64,
    pub step_high: f64,
}

impl TestCard {
    pub fn new(n: usize) -> Result<Self> {
        if n < 32 {
            return Err(Error::arg(format!("test card needs at least 32 pixels, got {n}")));
        }
        Ok(TestCard {
            size: n,
            background: 0.3,
            square: Rect {
                x0: n / 8,
                y0: n / 8,
                x1: 3 * n / 8,
                y1: 3 * n / 8,
            },
            square_level: 0.7,
            texture: Rect {
                x0: 5 * n / 8,
                y0: n / 8,
                x1: 7 * n / 8,
                y1: 3 * n / 8,
            },
            step_rows: (n / 2, n),
            step_column: n / 2,
            step_low: 0.2,
            step_high: 0.8,
        })
    }

    pub fn value(&self, x: usize, y: usize) -> f64 {
        if y >= self.step_rows.0 {
            return if x < self.step_column { self.step_low } else { self.step_high };
        }
        if self.square.contains(x, y) {
            self.square_level
        } else if self.texture.contains(x, y) {
            let phase = |v: usize| (2.0 * std::f64::consts::PI * v as f64 / 6.0).sin();
            0.5 + 0.15 * phase(x) * phase(y)
        } else {
            self.background
        }
    }

    pub fn clean(&self) -> Result<Image2D> {
        Image2D::from_fn(self.size, self.size, |x, y| self.value(x, y))
    }

    /// Flat areas at least `margin` pixels from every edge of the card's shapes.
    pub fn flat_regions(&self, margin: usize) -> Vec<Rect> {
        let n = self.size;
        let half = n / 2;
        vec![
            // background band between the top squares and the step half
            Rect { x0: 0, y0: 3 * n / 8, x1: n, y1: half }.inset(margin),
            self.square.inset(margin),
            Rect { x0: 0, y0: half, x1: self.step_column, y1: n }.inset(margin),
            Rect { x0: self.step_column, y0: half, x1: n, y1: n }.inset(margin),
        ]
        .into_iter()
        .filter(|r| r.x1 > r.x0 && r.y1 > r.y0)
        .collect()
    }

    pub fn generate(&self, noise: f64, seed: u64) -> Result<Synth2D> {
        let truth = self.clean()?;
        let noisy = add_awgn_image(&truth, noise, seed)?;
        Ok(Synth2D { truth, noisy })
    }
}

/// Difference between the mean of a band `[c + inner, c + outer)` right of
/// column `c` and the mirrored band on the left, over rows `[y0, y1)`.
pub fn edge_height(img: &Image2D, column: usize, rows: (usize, usize), inner: usize, outer: usize) -> f64 {
    let band = |x0: usize, x1: usize| {
        let r = Rect { x0, y0: rows.0, x1, y1: rows.1 };
        let count = ((x1 - x0) * (rows.1 - rows.0)) as f64;
        r.pixels(img).sum::<f64>() / count
    };
    band(column + inner, column + outer) - band(column - outer, column - inner)
}

/// Mean of the per-region variances.
pub fn flat_variance(img: &Image2D, regions: &[Rect]) -> f64 {
    let vars: Vec<f64> = regions
        .iter()
        .map(|r| {
            let v: Vec<f64> = r.pixels(img).collect();
            crate::metrics::variance(&v)
        })
        .collect();
    vars.iter().sum::<f64>() / vars.len() as f64
}
