//! Boundary mesh, sampled gradients and boundary-integral weights for a
//! harmonic basis.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::grid::Window2D;

use super::basis::HarmonicBasis;
use super::simplex::Constraints;

/// Gauss-Legendre points per unit boundary segment.
const QUAD_POINTS: usize = 12;

/// Gauss-Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes.push(0.5 * (1.0 - x));
        weights.push(1.0 / ((1.0 - x * x) * dp * dp));
    }
    (nodes, weights)
}

/// Rows `+-d_x f(y_l) +- d_y f(y_l)` of the linearized `|grad h|_1 <= 1`
/// constraint, four per mesh point, all with right-hand side 1.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientConstraints {
    n: usize,
    /// Per mesh point `n` x-derivatives followed by `n` y-derivatives.
    samples: Vec<f64>,
    /// The same values by mode: x-derivatives at every mesh point, then
    /// y-derivatives, for each mode in turn.
    by_mode: Vec<f64>,
}

const SIGNS: [(f64, f64); 4] = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)];

impl GradientConstraints {
    fn new(n: usize, samples: Vec<f64>) -> Self {
        let len = samples.len() / (2 * n);
        let mut by_mode = vec![0.0; samples.len()];
        for l in 0..len {
            for h in 0..n {
                by_mode[2 * h * len + l] = samples[2 * n * l + h];
                by_mode[(2 * h + 1) * len + l] = samples[2 * n * l + n + h];
            }
        }
        GradientConstraints {
            n,
            samples,
            by_mode,
        }
    }

    fn point(&self, l: usize) -> (&[f64], &[f64]) {
        let s = &self.samples[2 * self.n * l..2 * self.n * (l + 1)];
        s.split_at(self.n)
    }

    pub fn mesh_len(&self) -> usize {
        self.samples.len() / (2 * self.n)
    }
}

impl Constraints for GradientConstraints {
    fn num_rows(&self) -> usize {
        4 * self.mesh_len()
    }

    fn num_vars(&self) -> usize {
        self.n
    }

    fn rhs(&self, _j: usize) -> f64 {
        1.0
    }

    fn row_into(&self, j: usize, out: &mut [f64]) {
        let (gx, gy) = self.point(j / 4);
        let (sx, sy) = SIGNS[j % 4];
        for ((o, x), y) in out.iter_mut().zip(gx).zip(gy) {
            *o = sx * x + sy * y;
        }
    }

    fn mul_into(&self, v: &[f64], out: &mut [f64]) {
        self.mul_rows_into(v, 0..self.num_rows(), out);
    }

    fn mul_rows_into(&self, v: &[f64], rows: Range<usize>, out: &mut [f64]) {
        if rows.start % 4 != 0 || rows.end % 4 != 0 {
            for (o, j) in out.iter_mut().zip(rows) {
                *o = self.row_dot(j, v);
            }
            return;
        }
        let len = self.mesh_len();
        let points = rows.start / 4..rows.end / 4;
        let k = points.len();
        let mut px = vec![0.0; k];
        let mut py = vec![0.0; k];
        for (h, &vh) in v.iter().enumerate() {
            if vh == 0.0 {
                continue;
            }
            let gx = &self.by_mode[2 * h * len..(2 * h + 1) * len][points.clone()];
            let gy = &self.by_mode[(2 * h + 1) * len..(2 * h + 2) * len][points.clone()];
            for i in 0..k {
                px[i] += vh * gx[i];
            }
            for i in 0..k {
                py[i] += vh * gy[i];
            }
        }
        for ((quad, p), q) in out.chunks_exact_mut(4).zip(&px).zip(&py) {
            quad[0] = p + q;
            quad[1] = p - q;
            quad[2] = -p + q;
            quad[3] = -p - q;
        }
    }

    fn row_dot(&self, j: usize, v: &[f64]) -> f64 {
        let (gx, gy) = self.point(j / 4);
        let (sx, sy) = SIGNS[j % 4];
        let mut px = 0.0;
        let mut py = 0.0;
        for i in 0..self.n {
            px += gx[i] * v[i];
            py += gy[i] * v[i];
        }
        sx * px + sy * py
    }
}

/// Everything about the basis that does not depend on the image.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryTables {
    window: Window2D,
    n: usize,
    /// Mesh points `y_l` on the boundary, counterclockwise from `(-q1, -q2)`.
    pub mesh: Vec<[f64; 2]>,
    /// Outward normal of the edge each mesh point starts.
    pub normals: Vec<[f64; 2]>,
    /// Factor applied to each raw basis function so that
    /// `max_l |grad f_h(y_l)|_1 = 1`.
    pub scale: Vec<f64>,
    /// Offsets of the boundary pixels, counterclockwise from `(-q1, -q2)`.
    pub nodes: Vec<(isize, isize)>,
    /// `H[j * n + h] = int hat_j (grad f_h . n) ds`; node-major.
    h: Vec<f64>,
    constraints: GradientConstraints,
}

/// Outward normal of the edge starting at corner `e` (0 bottom, 1 right, 2 top, 3 left).
const EDGE_NORMALS: [[f64; 2]; 4] = [[0.0, -1.0], [1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]];

/// Number of mesh points on each horizontal and each vertical edge for a total
/// of `l`: proportional to edge length, `l` even.
pub fn split_mesh(w: Window2D, l: usize) -> Result<(usize, usize)> {
    let (a, b) = (2 * w.q1, 2 * w.q2);
    let perimeter_nodes = 2 * (a + b);
    if l < 4 * perimeter_nodes || l % 2 != 0 {
        return Err(Error::arg(format!(
            "boundary mesh size must be even and at least {} for window ({}, {}), got {l}",
            4 * perimeter_nodes,
            w.q1,
            w.q2
        )));
    }
    let nx = ((l * a) as f64 / (2 * (a + b)) as f64).round() as usize;
    Ok((nx, l / 2 - nx))
}

fn boundary_walk(w: Window2D, per_edge: [usize; 4]) -> Vec<([f64; 2], usize)> {
    let (q1, q2) = (w.q1 as f64, w.q2 as f64);
    let corners = [[-q1, -q2], [q1, -q2], [q1, q2], [-q1, q2]];
    let mut out = Vec::new();
    for e in 0..4 {
        let p0 = corners[e];
        let p1 = corners[(e + 1) % 4];
        let n = per_edge[e];
        for i in 0..n {
            let t = i as f64 / n as f64;
            out.push(([p0[0] + t * (p1[0] - p0[0]), p0[1] + t * (p1[1] - p0[1])], e));
        }
    }
    out
}

pub fn boundary_tables(basis: &HarmonicBasis, l: usize) -> Result<BoundaryTables> {
    let w = basis.window();
    let n = basis.len();
    let (nx, ny) = split_mesh(w, l)?;
    let walk = boundary_walk(w, [nx, ny, nx, ny]);
    let mesh: Vec<[f64; 2]> = walk.iter().map(|(p, _)| *p).collect();
    let normals: Vec<[f64; 2]> = walk.iter().map(|(_, e)| EDGE_NORMALS[*e]).collect();

    let mut raw = vec![0.0; mesh.len() * 2 * n];
    let mut scale = vec![0.0f64; n];
    for (li, p) in mesh.iter().enumerate() {
        for h in 0..n {
            let g = basis.gradient(h, p[0], p[1]);
            raw[2 * n * li + h] = g[0];
            raw[2 * n * li + n + h] = g[1];
            scale[h] = scale[h].max(g[0].abs() + g[1].abs());
        }
    }
    if scale.iter().any(|&s| !(s > 0.0)) {
        return Err(Error::Numerical(
            "a basis gradient vanishes on the whole boundary mesh".into(),
        ));
    }
    for s in scale.iter_mut() {
        *s = 1.0 / *s;
    }
    for chunk in raw.chunks_exact_mut(n) {
        for (v, s) in chunk.iter_mut().zip(&scale) {
            *v *= s;
        }
    }

    // Boundary pixels one unit apart; hats are linear along each unit segment.
    let unit = boundary_walk(w, [2 * w.q1, 2 * w.q2, 2 * w.q1, 2 * w.q2]);
    let nodes: Vec<(isize, isize)> = unit
        .iter()
        .map(|(p, _)| (p[0].round() as isize, p[1].round() as isize))
        .collect();
    let j_count = nodes.len();
    let (qt, qw) = gauss_legendre(QUAD_POINTS);
    let mut hmat = vec![0.0; j_count * n];
    for j in 0..j_count {
        let (p0, e) = unit[j];
        let p1 = unit[(j + 1) % j_count].0;
        let normal = EDGE_NORMALS[e];
        for (t, wt) in qt.iter().zip(&qw) {
            let p = [p0[0] + t * (p1[0] - p0[0]), p0[1] + t * (p1[1] - p0[1])];
            let j1 = (j + 1) % j_count;
            for h in 0..n {
                let g = basis.gradient(h, p[0], p[1]);
                let flux = scale[h] * (g[0] * normal[0] + g[1] * normal[1]) * wt;
                hmat[j * n + h] += (1.0 - t) * flux;
                hmat[j1 * n + h] += t * flux;
            }
        }
    }

    Ok(BoundaryTables {
        window: w,
        n,
        mesh,
        normals,
        scale,
        nodes,
        h: hmat,
        constraints: GradientConstraints::new(n, raw),
    })
}

impl BoundaryTables {
    pub fn window(&self) -> Window2D {
        self.window
    }

    pub fn num_modes(&self) -> usize {
        self.n
    }

    pub fn constraints(&self) -> &GradientConstraints {
        &self.constraints
    }

    /// Normalized `grad f_h(y_l)`.
    pub fn grad_sample(&self, l: usize, h: usize) -> [f64; 2] {
        let (gx, gy) = self.constraints.point(l);
        [gx[h], gy[h]]
    }

    /// `H_{h,j}` for boundary node `j`.
    pub fn h(&self, h: usize, j: usize) -> f64 {
        self.h[j * self.n + h]
    }

    /// Objective `c_h = sum_j u_j H_{h,j}` for boundary values `u_j` given in
    /// node order.
    pub fn objective_into(&self, boundary_values: impl Iterator<Item = f64>, c: &mut [f64]) {
        c.iter_mut().for_each(|v| *v = 0.0);
        for (u, row) in boundary_values.zip(self.h.chunks_exact(self.n)) {
            for (ci, hv) in c.iter_mut().zip(row) {
                *ci += u * hv;
            }
        }
    }
}
