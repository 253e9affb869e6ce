//! Exact anisotropic total variation of the bilinear interpolant on each
//! pixel cell, and its aggregation over the sliding window.

use crate::error::{Error, Result};
use crate::grid::{Image2D, Window2D};

/// `int_0^1 |(1 - t) p + t q| dt`
#[inline]
fn abs_linear_integral(p: f64, q: f64) -> f64 {
    let (ap, aq) = (p.abs(), q.abs());
    if p * q >= 0.0 {
        0.5 * (ap + aq)
    } else {
        (p * p + q * q) / (2.0 * (ap + aq))
    }
}

/// `int int_{[0,1]^2} |grad P|_1` for the bilinear `P` with corners
/// `P(0,0) = u00`, `P(1,0) = u10`, `P(0,1) = u01`, `P(1,1) = u11`.
///
/// `dP/dx` varies linearly in y from `u10 - u00` to `u11 - u01`, and `dP/dy`
/// linearly in x from `u01 - u00` to `u11 - u10`.
#[inline]
pub fn cell_tv(u00: f64, u10: f64, u01: f64, u11: f64) -> f64 {
    abs_linear_integral(u10 - u00, u11 - u01) + abs_linear_integral(u01 - u00, u11 - u10)
}

/// Cell TV for the `(width - 1) x (height - 1)` cells of an image; entry
/// `(x, y)` is the cell with lower corner at pixel `(x, y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CellTVField {
    pub width: usize,
    pub height: usize,
    pub values: Vec<f64>,
}

impl CellTVField {
    pub fn from_image(img: &Image2D) -> Self {
        let (w, h) = (img.width(), img.height());
        let cw = w.saturating_sub(1);
        let ch = h.saturating_sub(1);
        let mut values = Vec::with_capacity(cw * ch);
        for y in 0..ch {
            let r0 = img.row(y);
            let r1 = img.row(y + 1);
            for x in 0..cw {
                values.push(cell_tv(r0[x], r0[x + 1], r1[x], r1[x + 1]));
            }
        }
        CellTVField {
            width: cw,
            height: ch,
            values,
        }
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[y * self.width + x]
    }
}

/// Per-pixel denominator `D(x) = int_{x+Q} |grad u|_1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TVField {
    pub width: usize,
    pub height: usize,
    pub values: Vec<f64>,
}

impl TVField {
    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[y * self.width + x]
    }
}

/// Window sums of cell TV for an image padded by `(q1, q2)`. The result covers
/// the unpadded interior: `D[x, y]` sums the `4 q1 q2` cells of `(x, y) + Q`.
pub fn tv_field(padded: &Image2D, w: Window2D) -> Result<TVField> {
    let (pw, ph) = (padded.width(), padded.height());
    if pw <= 2 * w.q1 || ph <= 2 * w.q2 {
        return Err(Error::arg(format!(
            "padded image {pw}x{ph} is too small for window ({}, {})",
            w.q1, w.q2
        )));
    }
    let cells = CellTVField::from_image(padded);
    let (cw, ch) = (cells.width, cells.height);

    // Summed-area table with a zero first row and column.
    let sw = cw + 1;
    let mut sat = vec![0.0f64; sw * (ch + 1)];
    for y in 0..ch {
        let mut row_sum = 0.0;
        for x in 0..cw {
            row_sum += cells.get(x, y);
            sat[(y + 1) * sw + x + 1] = sat[y * sw + x + 1] + row_sum;
        }
    }

    let width = pw - 2 * w.q1;
    let height = ph - 2 * w.q2;
    // Interior pixel (x, y) is padded pixel (x + q1, y + q2); its window's cells
    // have lower corners in [x, x + 2 q1) x [y, y + 2 q2) of the padded grid.
    let (dx, dy) = (2 * w.q1, 2 * w.q2);
    let mut values = Vec::with_capacity(width * height);
    for y in 0..height {
        for x in 0..width {
            let s = sat[(y + dy) * sw + x + dx] - sat[y * sw + x + dx] - sat[(y + dy) * sw + x]
                + sat[y * sw + x];
            values.push(s.max(0.0));
        }
    }
    Ok(TVField {
        width,
        height,
        values,
    })
}
