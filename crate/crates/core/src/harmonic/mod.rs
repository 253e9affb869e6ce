//! Two-dimensional local variation: the supremum of boundary integrals over
//! harmonic test functions with `|grad h|_1 <= 1`, one small LP per pixel.

pub mod basis;
pub mod simplex;
pub mod tables;

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{mirror_pad_2d, Image2D, Window2D};
use crate::tv2d::tv_field;

pub use basis::{build_basis, HarmonicBasis, Mode};
pub use simplex::{
    simplex_solve, solve_lp, solve_lp_warm, try_optimal, Constraints, DenseConstraints,
    LpSolution, WarmStart, CERT_TOL,
};
pub use tables::{boundary_tables, split_mesh, BoundaryTables, GradientConstraints};

/// Default number of sin/sinh wavenumbers.
pub const DEFAULT_MODES: usize = 3;
/// Default number of boundary mesh points.
pub const DEFAULT_BOUNDARY_MESH: usize = 400;

fn gather_objective(padded: &Image2D, cx: usize, cy: usize, tables: &BoundaryTables, c: &mut [f64]) {
    // Weights of each mode sum to zero; offsetting by the center value makes
    // constant patches give an exactly zero objective.
    let center = padded.get(cx, cy);
    let values = tables.nodes.iter().map(|&(dx, dy)| {
        padded.get((cx as isize + dx) as usize, (cy as isize + dy) as usize) - center
    });
    tables.objective_into(values, c);
}

fn check_center(padded: &Image2D, cx: usize, cy: usize, w: Window2D) -> Result<()> {
    if cx < w.q1 || cy < w.q2 || cx + w.q1 >= padded.width() || cy + w.q2 >= padded.height() {
        return Err(Error::arg(format!(
            "window ({}, {}) around ({cx}, {cy}) leaves the {}x{} image",
            w.q1,
            w.q2,
            padded.width(),
            padded.height()
        )));
    }
    Ok(())
}

/// Full LP solution for the window centered at pixel `(cx, cy)` of `padded`.
pub fn lv_solution(
    padded: &Image2D,
    cx: usize,
    cy: usize,
    tables: &BoundaryTables,
) -> Result<LpSolution> {
    check_center(padded, cx, cy, tables.window())?;
    let mut c = vec![0.0; tables.num_modes()];
    gather_objective(padded, cx, cy, tables, &mut c);
    Ok(solve_lp(&c, tables.constraints())?.0)
}

/// Local variation numerator `N_U` at pixel `(cx, cy)` of an image already
/// padded by the window half-widths.
pub fn lv_numerator(padded: &Image2D, cx: usize, cy: usize, tables: &BoundaryTables) -> Result<f64> {
    Ok(lv_solution(padded, cx, cy, tables)?.value.max(0.0))
}

/// Per-pixel ratio field with solver diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioField2D {
    pub width: usize,
    pub height: usize,
    pub values: Vec<f64>,
    /// Pixels whose unclamped ratio fell outside `[0, 1]`.
    pub clamp_events: usize,
    pub pivots: usize,
    pub cold_solves: usize,
}

/// Ratio field solver that keeps each pixel's optimal basis between calls.
/// Consecutive images in a time loop differ little, so most pixels are
/// certified at the previous basis without any pivot.
///
/// Results do not depend on the number of worker threads: rows are solved
/// independently, each pixel starting from its own previous basis or from its
/// left neighbor's current one.
#[derive(Debug)]
pub struct RatioSolver2D {
    tables: Arc<BoundaryTables>,
    starts: Vec<Option<Arc<WarmStart>>>,
    dims: (usize, usize),
}

struct RowResult {
    ratios: Vec<f64>,
    starts: Vec<Arc<WarmStart>>,
    clamp_events: usize,
    pivots: usize,
    cold_solves: usize,
}

impl RatioSolver2D {
    pub fn new(tables: Arc<BoundaryTables>) -> Self {
        RatioSolver2D {
            tables,
            starts: Vec::new(),
            dims: (0, 0),
        }
    }

    pub fn tables(&self) -> &BoundaryTables {
        &self.tables
    }

    /// Forget the stored bases.
    pub fn reset(&mut self) {
        self.starts.clear();
        self.dims = (0, 0);
    }

    pub fn ratio_field(&mut self, img: &Image2D, eps_tv: f64) -> Result<RatioField2D> {
        if !(eps_tv > 0.0 && eps_tv.is_finite()) {
            return Err(Error::arg(format!("eps_tv must be positive, got {eps_tv}")));
        }
        let w = self.tables.window();
        let (width, height) = (img.width(), img.height());
        w.check(width, height)?;
        if self.dims != (width, height) {
            self.starts = vec![None; width * height];
            self.dims = (width, height);
        }
        let padded = mirror_pad_2d(img, w.q1, w.q2)?;
        let tv = tv_field(&padded, w)?;
        let tables = &*self.tables;
        let starts = &self.starts;

        let rows: Vec<Result<RowResult>> = (0..height)
            .into_par_iter()
            .map(|y| solve_row(&padded, &tv.values[y * width..(y + 1) * width], y, width, tables, starts, eps_tv))
            .collect();

        let mut field = RatioField2D {
            width,
            height,
            values: Vec::with_capacity(width * height),
            clamp_events: 0,
            pivots: 0,
            cold_solves: 0,
        };
        let mut next = Vec::with_capacity(width * height);
        for row in rows {
            let row = row?;
            field.values.extend(row.ratios);
            field.clamp_events += row.clamp_events;
            field.pivots += row.pivots;
            field.cold_solves += row.cold_solves;
            next.extend(row.starts);
        }
        // Share one copy per distinct basis.
        let mut seen: HashMap<Vec<usize>, Arc<WarmStart>> = HashMap::new();
        self.starts = next
            .into_iter()
            .map(|ws| {
                let shared = seen.entry(ws.basis().to_vec()).or_insert_with(|| ws.clone());
                Some(shared.clone())
            })
            .collect();
        Ok(field)
    }
}

fn solve_row(
    padded: &Image2D,
    tv_row: &[f64],
    y: usize,
    width: usize,
    tables: &BoundaryTables,
    starts: &[Option<Arc<WarmStart>>],
    eps_tv: f64,
) -> Result<RowResult> {
    let w = tables.window();
    let g = tables.constraints();
    let mut c = vec![0.0; tables.num_modes()];
    let mut out = RowResult {
        ratios: Vec::with_capacity(width),
        starts: Vec::with_capacity(width),
        clamp_events: 0,
        pivots: 0,
        cold_solves: 0,
    };
    for x in 0..width {
        gather_objective(padded, x + w.q1, y + w.q2, tables, &mut c);
        let own = starts[y * width + x].as_ref();
        let left = out.starts.last();
        let mut found = None;
        for cand in [own, left].into_iter().flatten() {
            if let Some(sol) = try_optimal(&c, g, cand) {
                found = Some((sol, cand.clone()));
                break;
            }
        }
        let (sol, start) = match found {
            Some(hit) => hit,
            None => match own {
                Some(cand) => {
                    let mut ws = (**cand).clone();
                    let sol = solve_lp_warm(&c, g, &mut ws)?;
                    ws.compact();
                    (sol, Arc::new(ws))
                }
                None => {
                    let (sol, mut ws) = solve_lp(&c, g)?;
                    ws.compact();
                    out.cold_solves += 1;
                    (sol, Arc::new(ws))
                }
            },
        };
        out.pivots += sol.pivots;
        let raw = sol.value.max(0.0) / (eps_tv + tv_row[x]);
        if !(0.0..=1.0).contains(&raw) {
            out.clamp_events += 1;
        }
        out.ratios.push(raw.clamp(0.0, 1.0));
        out.starts.push(start);
    }
    Ok(out)
}

/// `R = clamp(N_U / (eps_tv + D_U), 0, 1)` for every pixel of `img`.
pub fn ratio_field_2d(
    img: &Image2D,
    w: Window2D,
    tables: &BoundaryTables,
    eps_tv: f64,
) -> Result<RatioField2D> {
    if tables.window() != w {
        return Err(Error::arg("boundary tables were built for a different window"));
    }
    RatioSolver2D::new(Arc::new(tables.clone())).ratio_field(img, eps_tv)
}
