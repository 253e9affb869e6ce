//! Dense simplex for `max c.a  s.t.  G a <= b` with free `a` and `b > 0`.
//!
//! The solver works on the dual standard form `min b.y  s.t.  G^T y = c, y >= 0`,
//! whose basis matrix is only `n x n` (`n` = number of free variables) however
//! many constraint rows there are. A cold solve runs the two-phase revised
//! simplex with artificials and partial pricing. A warm solve reuses an
//! optimal basis from a previous objective: a few parametric dual simplex
//! pivots settle small changes, and otherwise the two-phase method restarts
//! from that basis with a single artificial column. Either way the multipliers of the final
//! basis are the primal optimum `a*`, and the result is checked before it is
//! returned: `G a* <= b`, `y >= 0`, `G^T y = c` and `c.a* = b.y`.

use std::ops::Range;

use crate::error::{Error, Result};

const PIVOT_TOL: f64 = 1e-9;
const FEAS_TOL: f64 = 1e-11;
/// Tolerance of the optimality certificate.
pub const CERT_TOL: f64 = 1e-9;
/// Consecutive degenerate pivots before switching to Bland's rule.
const DEGENERATE_STREAK: usize = 30;
const REFACTOR_EVERY: usize = 64;
/// Cold solves price one block of about this many rows per iteration.
const PRICING_BLOCK: usize = 128;
/// A warm solve gives up after this many parametric pivots and restarts the
/// two-phase method from its basis, which handles large objective changes
/// much better than walking from vertex to vertex.
const WARM_PIVOT_CAP: usize = 2;

/// Constraint rows `G_j . a <= b_j`.
pub trait Constraints: Sync {
    fn num_rows(&self) -> usize;
    fn num_vars(&self) -> usize;
    fn rhs(&self, j: usize) -> f64;
    /// Writes row `j` of `G` into `out`.
    fn row_into(&self, j: usize, out: &mut [f64]);
    /// `out[j] = G_j . v` for every row.
    fn mul_into(&self, v: &[f64], out: &mut [f64]);

    /// `out[k] = G_j . v` for the `k`-th row `j` of `rows`.
    fn mul_rows_into(&self, v: &[f64], rows: Range<usize>, out: &mut [f64]) {
        for (o, j) in out.iter_mut().zip(rows) {
            *o = self.row_dot(j, v);
        }
    }

    fn row_dot(&self, j: usize, v: &[f64]) -> f64 {
        let mut row = vec![0.0; self.num_vars()];
        self.row_into(j, &mut row);
        dot(&row, v)
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Row-major dense constraint matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseConstraints {
    n: usize,
    rows: Vec<f64>,
    rhs: Vec<f64>,
}

impl DenseConstraints {
    pub fn new(rows: &[Vec<f64>], rhs: &[f64]) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        if rows.len() != rhs.len() {
            return Err(Error::arg("one right-hand side value per row is required"));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::arg("constraint rows have different lengths"));
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        if flat.iter().any(|v| !v.is_finite()) {
            return Err(Error::arg("constraint matrix has non-finite entries"));
        }
        Ok(DenseConstraints {
            n,
            rows: flat,
            rhs: rhs.to_vec(),
        })
    }
}

impl Constraints for DenseConstraints {
    fn num_rows(&self) -> usize {
        self.rhs.len()
    }

    fn num_vars(&self) -> usize {
        self.n
    }

    fn rhs(&self, j: usize) -> f64 {
        self.rhs[j]
    }

    fn row_into(&self, j: usize, out: &mut [f64]) {
        out.copy_from_slice(&self.rows[j * self.n..(j + 1) * self.n]);
    }

    fn mul_into(&self, v: &[f64], out: &mut [f64]) {
        self.mul_rows_into(v, 0..self.rhs.len(), out);
    }

    fn mul_rows_into(&self, v: &[f64], rows: Range<usize>, out: &mut [f64]) {
        let block = &self.rows[rows.start * self.n..rows.end * self.n];
        for (o, row) in out.iter_mut().zip(block.chunks_exact(self.n)) {
            *o = dot(row, v);
        }
    }

    fn row_dot(&self, j: usize, v: &[f64]) -> f64 {
        dot(&self.rows[j * self.n..(j + 1) * self.n], v)
    }
}

/// Optimal vertex with its certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    /// Primal optimum `a*`.
    pub x: Vec<f64>,
    /// `c . a*`
    pub value: f64,
    /// Nonzero dual weights `(row, y_row)`; `G^T y = c`.
    pub dual: Vec<(usize, f64)>,
    /// Largest `G_j . a* - b_j`.
    pub max_violation: f64,
    /// `|c . a* - b . y|`
    pub duality_gap: f64,
    pub pivots: usize,
}

/// Basis of the dual standard form with its inverse and vertex. Once it has
/// been optimal for one objective it is a valid starting point for any other.
#[derive(Debug, Clone)]
pub struct WarmStart {
    basis: Vec<usize>,
    binv: Vec<f64>,
    /// Vertex `a` of the basis, `B^T a = b_B`.
    x: Vec<f64>,
    /// Largest `G_j . a - b_j` at the vertex.
    max_violation: f64,
    /// Slacks `b - G a`; empty until a pivot needs them.
    reduced: Vec<f64>,
    pivots_since_refactor: usize,
}

impl WarmStart {
    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    pub fn vertex(&self) -> &[f64] {
        &self.x
    }

    /// Rebuild from a saved basis. Fails if the rows are singular or the
    /// vertex they define is infeasible.
    pub fn from_basis<C: Constraints + ?Sized>(g: &C, basis: &[usize]) -> Result<Self> {
        let n = g.num_vars();
        if basis.len() != n || basis.iter().any(|&j| j >= g.num_rows()) {
            return Err(Error::arg("basis does not match the constraint matrix"));
        }
        let mut ws = WarmStart {
            basis: basis.to_vec(),
            binv: vec![0.0; n * n],
            x: vec![0.0; n],
            max_violation: 0.0,
            reduced: Vec::new(),
            pivots_since_refactor: 0,
        };
        ws.refactor(g)?;
        if ws.max_violation > CERT_TOL {
            return Err(Error::Numerical("saved basis is not dual feasible".into()));
        }
        Ok(ws)
    }

    /// Drop the per-row slacks to keep stored starts small.
    pub fn compact(&mut self) {
        self.reduced = Vec::new();
    }

    /// Recompute `B^-1`, the vertex and the slacks from the basis indices.
    fn refactor<C: Constraints + ?Sized>(&mut self, g: &C) -> Result<()> {
        let n = g.num_vars();
        // B has columns G_j for j in the basis, i.e. B^T has those rows.
        let mut bt = vec![0.0; n * n];
        for (k, &j) in self.basis.iter().enumerate() {
            g.row_into(j, &mut bt[k * n..(k + 1) * n]);
        }
        let bt_inv = invert(&bt, n)
            .ok_or_else(|| Error::Numerical("basis matrix is singular".into()))?;
        // (B^T)^-1 = (B^-1)^T
        for i in 0..n {
            for k in 0..n {
                self.binv[k * n + i] = bt_inv[i * n + k];
            }
        }
        self.pivots_since_refactor = 0;
        self.update_vertex(g);
        Ok(())
    }

    /// `a = B^-T b_B`, then the slacks at `a`.
    fn update_vertex<C: Constraints + ?Sized>(&mut self, g: &C) {
        let n = g.num_vars();
        self.x.iter_mut().for_each(|v| *v = 0.0);
        for (k, &j) in self.basis.iter().enumerate() {
            let bj = g.rhs(j);
            for (i, p) in self.x.iter_mut().enumerate() {
                *p += bj * self.binv[k * n + i];
            }
        }
        self.reduced.resize(g.num_rows(), 0.0);
        g.mul_into(&self.x, &mut self.reduced);
        let mut worst = f64::NEG_INFINITY;
        for (j, d) in self.reduced.iter_mut().enumerate() {
            let b = g.rhs(j);
            worst = worst.max(*d - b);
            *d = b - *d;
        }
        self.max_violation = worst;
    }

    fn ensure_reduced<C: Constraints + ?Sized>(&mut self, g: &C) {
        if self.reduced.len() != g.num_rows() {
            self.update_vertex(g);
        }
    }
}

/// Gauss-Jordan inverse with partial pivoting; `None` if singular.
fn invert(a: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut m = a.to_vec();
    let mut inv = vec![0.0; n * n];
    for i in 0..n {
        inv[i * n + i] = 1.0;
    }
    let scale = a.iter().fold(0.0f64, |s, v| s.max(v.abs())).max(f64::MIN_POSITIVE);
    for col in 0..n {
        let p = (col..n).max_by(|&i, &j| m[i * n + col].abs().total_cmp(&m[j * n + col].abs()))?;
        if m[p * n + col].abs() <= 1e-13 * scale {
            return None;
        }
        if p != col {
            for c in 0..n {
                m.swap(p * n + c, col * n + c);
                inv.swap(p * n + c, col * n + c);
            }
        }
        let d = m[col * n + col];
        for c in 0..n {
            m[col * n + c] /= d;
            inv[col * n + c] /= d;
        }
        for r in 0..n {
            if r != col {
                let f = m[r * n + col];
                if f != 0.0 {
                    for c in 0..n {
                        m[r * n + c] -= f * m[col * n + c];
                        inv[r * n + c] -= f * inv[col * n + c];
                    }
                }
            }
        }
    }
    Some(inv)
}

/// Replace basis position `r` using the entering column `w = B^-1 a_e`.
fn pivot_binv(binv: &mut [f64], n: usize, r: usize, w: &[f64]) {
    let wr = w[r];
    for c in 0..n {
        binv[r * n + c] /= wr;
    }
    for k in 0..n {
        if k != r && w[k] != 0.0 {
            let f = w[k];
            for c in 0..n {
                binv[k * n + c] -= f * binv[r * n + c];
            }
        }
    }
}

fn check_inputs<C: Constraints + ?Sized>(c: &[f64], g: &C) -> Result<()> {
    if c.len() != g.num_vars() {
        return Err(Error::arg(format!(
            "objective has {} entries for {} variables",
            c.len(),
            g.num_vars()
        )));
    }
    if c.iter().any(|v| !v.is_finite()) {
        return Err(Error::arg("objective has non-finite entries"));
    }
    if (0..g.num_rows()).any(|j| !(g.rhs(j) > 0.0)) {
        return Err(Error::arg("right-hand side must be strictly positive"));
    }
    Ok(())
}

fn iteration_cap<C: Constraints + ?Sized>(g: &C) -> usize {
    50 * (g.num_rows() + g.num_vars()) + 1000
}

/// Cold solve: two-phase revised simplex on the dual standard form.
pub fn solve_lp<C: Constraints + ?Sized>(c: &[f64], g: &C) -> Result<(LpSolution, WarmStart)> {
    check_inputs(c, g)?;
    let n = g.num_vars();
    let m = g.num_rows();
    if n == 0 {
        let sol = LpSolution {
            x: Vec::new(),
            value: 0.0,
            dual: Vec::new(),
            max_violation: f64::NEG_INFINITY,
            duality_gap: 0.0,
            pivots: 0,
        };
        let ws = WarmStart {
            basis: Vec::new(),
            binv: Vec::new(),
            x: Vec::new(),
            max_violation: f64::NEG_INFINITY,
            reduced: (0..m).map(|j| g.rhs(j)).collect(),
            pivots_since_refactor: 0,
        };
        return Ok((sol, ws));
    }

    // Variables 0..m are the dual weights y_j, m..m+n the artificials.
    let sign: Vec<f64> = c.iter().map(|&v| if v < 0.0 { -1.0 } else { 1.0 }).collect();
    let basis: Vec<usize> = (m..m + n).collect();
    let mut binv = vec![0.0; n * n];
    for i in 0..n {
        binv[i * n + i] = sign[i];
    }
    let xb: Vec<f64> = c.iter().map(|v| v.abs()).collect();
    two_phase(c, g, basis, binv, xb)
}

/// Cold solve restarted from a basis that was optimal for another objective.
/// One artificial column, `-sum` of the basic rows, absorbs the negative
/// weights of `B^-1 c`; phase one then drives it out.
fn solve_lp_crash<C: Constraints + ?Sized>(
    c: &[f64],
    g: &C,
    start: &WarmStart,
) -> Result<(LpSolution, WarmStart)> {
    let n = g.num_vars();
    let m = g.num_rows();
    let mut binv = start.binv.clone();
    let mut xb = vec![0.0; n];
    for k in 0..n {
        xb[k] = dot(&binv[k * n..(k + 1) * n], c);
    }
    let (r, lowest) = xb
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or_else(|| Error::arg("empty basis"))?;
    if lowest >= 0.0 {
        return two_phase(c, g, start.basis.clone(), binv, xb);
    }
    // B^-1 of the artificial column is -1 in every position.
    let z = -lowest;
    xb.iter_mut().for_each(|v| *v += z);
    xb[r] = z;
    pivot_binv(&mut binv, n, r, &vec![-1.0; n]);
    let mut basis = start.basis.clone();
    basis[r] = m;
    two_phase(c, g, basis, binv, xb)
}

/// Two-phase revised simplex from a feasible basis of the dual standard form.
/// Basis entries `>= m` are artificials; phase one minimizes their sum.
fn two_phase<C: Constraints + ?Sized>(
    c: &[f64],
    g: &C,
    mut basis: Vec<usize>,
    mut binv: Vec<f64>,
    mut xb: Vec<f64>,
) -> Result<(LpSolution, WarmStart)> {
    let n = g.num_vars();
    let m = g.num_rows();
    let mut in_basis = vec![false; m];
    for &v in &basis {
        if v < m {
            in_basis[v] = true;
        }
    }
    let mut pivots = 0usize;
    let cap = iteration_cap(g);

    let mut col = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut gpi = vec![0.0; m];
    let block_len = PRICING_BLOCK.div_ceil(4) * 4;
    let blocks = m.div_ceil(block_len);
    let mut next_block = 0;

    for phase in [1, 2] {
        let cost = |v: usize| -> f64 {
            match (phase, v < m) {
                (1, true) => 0.0,
                (1, false) => 1.0,
                (_, true) => g.rhs(v),
                (_, false) => 0.0,
            }
        };
        let mut bland = false;
        let mut streak = 0usize;
        loop {
            if pivots > cap {
                return Err(Error::IterationLimit(cap));
            }
            if phase == 1
                && basis.iter().zip(&xb).all(|(&v, &x)| v < m || x.abs() <= FEAS_TOL)
            {
                break;
            }
            let mut pi = vec![0.0; n];
            for (k, &v) in basis.iter().enumerate() {
                let cv = cost(v);
                if cv != 0.0 {
                    for (i, p) in pi.iter_mut().enumerate() {
                        *p += cv * binv[k * n + i];
                    }
                }
            }
            // Partial pricing: the first block, in rotation, with an
            // improving row supplies the entering one. Bland's rule scans
            // from the first row.
            let mut entering = None;
            let first = if bland { 0 } else { next_block };
            for b in 0..blocks {
                let blk = (first + b) % blocks;
                let rows = blk * block_len..((blk + 1) * block_len).min(m);
                let d = &mut gpi[..rows.len()];
                g.mul_rows_into(&pi, rows.clone(), d);
                let mut best = -FEAS_TOL;
                for (k, j) in rows.enumerate() {
                    if in_basis[j] {
                        continue;
                    }
                    let dj = cost(j) - d[k];
                    if bland {
                        if dj < -FEAS_TOL {
                            entering = Some(j);
                            break;
                        }
                    } else if dj < best {
                        best = dj;
                        entering = Some(j);
                    }
                }
                if entering.is_some() {
                    next_block = (blk + 1) % blocks;
                    break;
                }
            }
            let Some(e) = entering else { break };

            g.row_into(e, &mut col);
            for k in 0..n {
                w[k] = dot(&binv[k * n..(k + 1) * n], &col);
            }
            let mut leave: Option<usize> = None;
            let mut best_ratio = f64::INFINITY;
            for k in 0..n {
                if w[k] > PIVOT_TOL {
                    let ratio = xb[k].max(0.0) / w[k];
                    let better = match leave {
                        None => true,
                        Some(l) => {
                            if ratio < best_ratio - 1e-14 {
                                true
                            } else if ratio <= best_ratio + 1e-14 {
                                // ties: artificials first, then Bland or the larger pivot
                                let (a_art, b_art) = (basis[k] >= m, basis[l] >= m);
                                if a_art != b_art {
                                    a_art
                                } else if bland {
                                    basis[k] < basis[l]
                                } else {
                                    w[k] > w[l]
                                }
                            } else {
                                false
                            }
                        }
                    };
                    if better {
                        best_ratio = ratio;
                        leave = Some(k);
                    }
                }
            }
            let Some(r) = leave else {
                // The dual is bounded below by zero when b > 0.
                return Err(Error::Numerical("dual ray found with positive costs".into()));
            };
            let theta = best_ratio;
            for k in 0..n {
                if k != r {
                    xb[k] -= theta * w[k];
                }
            }
            xb[r] = theta;
            pivot_binv(&mut binv, n, r, &w);
            if basis[r] < m {
                in_basis[basis[r]] = false;
            }
            basis[r] = e;
            in_basis[e] = true;
            pivots += 1;
            if theta <= 1e-14 {
                streak += 1;
                if streak > DEGENERATE_STREAK {
                    bland = true;
                }
            } else {
                streak = 0;
            }
        }

        if phase == 1 {
            let infeasibility: f64 = basis
                .iter()
                .zip(&xb)
                .filter(|(&v, _)| v >= m)
                .map(|(_, x)| x.abs())
                .sum();
            let cnorm = c.iter().fold(0.0f64, |s, v| s.max(v.abs()));
            if infeasibility > 1e-9 * (1.0 + cnorm) {
                return Err(Error::Unbounded);
            }
            // Swap remaining artificials for constraint rows.
            for r in 0..n {
                if basis[r] < m {
                    continue;
                }
                let rho = &binv[r * n..(r + 1) * n];
                let rho = rho.to_vec();
                g.mul_into(&rho, &mut gpi);
                let candidate = (0..m)
                    .filter(|&j| !in_basis[j])
                    .max_by(|&a, &b| gpi[a].abs().total_cmp(&gpi[b].abs()));
                let Some(e) = candidate.filter(|&j| gpi[j].abs() > PIVOT_TOL) else {
                    return Err(Error::Unbounded);
                };
                g.row_into(e, &mut col);
                for k in 0..n {
                    w[k] = dot(&binv[k * n..(k + 1) * n], &col);
                }
                let theta = xb[r] / w[r];
                for k in 0..n {
                    if k != r {
                        xb[k] -= theta * w[k];
                    }
                }
                xb[r] = theta;
                pivot_binv(&mut binv, n, r, &w);
                basis[r] = e;
                in_basis[e] = true;
                pivots += 1;
            }
        }
    }

    let mut ws = WarmStart {
        basis,
        binv,
        x: vec![0.0; n],
        max_violation: 0.0,
        reduced: Vec::new(),
        pivots_since_refactor: 0,
    };
    ws.refactor(g)?;
    let mut sol = certify(c, g, &ws)?;
    sol.pivots = pivots;
    Ok((sol, ws))
}

/// Certified solution at the start's basis if that basis is already optimal
/// for `c`. Costs `O(n^2)`: the vertex's feasibility was certified when the
/// start was built.
pub fn try_optimal<C: Constraints + ?Sized>(c: &[f64], g: &C, ws: &WarmStart) -> Option<LpSolution> {
    if c.len() != g.num_vars() || ws.basis.len() != c.len() {
        return None;
    }
    certify(c, g, ws).ok()
}

/// Warm solve from a basis that was optimal for some earlier objective.
/// Falls back to a cold solve if the warm path cannot certify its answer.
pub fn solve_lp_warm<C: Constraints + ?Sized>(
    c: &[f64],
    g: &C,
    ws: &mut WarmStart,
) -> Result<LpSolution> {
    check_inputs(c, g)?;
    let start = ws.clone();
    match dual_simplex(c, g, ws) {
        Ok(sol) => Ok(sol),
        Err(Error::Unbounded) => Err(Error::Unbounded),
        Err(_) => {
            let (sol, fresh) = match solve_lp_crash(c, g, &start) {
                Ok(done) => done,
                Err(_) => solve_lp(c, g)?,
            };
            *ws = fresh;
            Ok(sol)
        }
    }
}

/// Parametric dual simplex. The objective moves along a segment from a point
/// inside the optimality cone of the start basis to `c`; each pivot crosses
/// one cone boundary, so nearby objectives need few pivots.
fn dual_simplex<C: Constraints + ?Sized>(
    c: &[f64],
    g: &C,
    ws: &mut WarmStart,
) -> Result<LpSolution> {
    let n = g.num_vars();
    let m = g.num_rows();
    if ws.basis.len() != n {
        return Err(Error::arg("warm start belongs to a different problem"));
    }
    let mul_binv = |binv: &[f64], v: &[f64], out: &mut [f64]| {
        for k in 0..n {
            out[k] = dot(&binv[k * n..(k + 1) * n], v);
        }
    };
    let mut y0 = vec![0.0; n];
    mul_binv(&ws.binv, c, &mut y0);
    if y0.iter().all(|&v| v >= -FEAS_TOL) {
        if let Ok(sol) = certify(c, g, ws) {
            return Ok(sol);
        }
    }
    ws.ensure_reduced(g);
    let mut in_basis = vec![false; m];
    for &j in &ws.basis {
        in_basis[j] = true;
    }

    // Start at the sum of the basic rows, scaled to the size of c.
    let mut col = vec![0.0; n];
    let mut c0 = vec![0.0; n];
    for &j in &ws.basis {
        g.row_into(j, &mut col);
        c0.iter_mut().zip(&col).for_each(|(a, b)| *a += b);
    }
    let s = dot(c, c).sqrt() / dot(&c0, &c0).sqrt().max(f64::MIN_POSITIVE);
    c0.iter_mut().for_each(|v| *v *= s);
    let dc: Vec<f64> = c.iter().zip(&c0).map(|(a, b)| a - b).collect();

    let mut dy = vec![0.0; n];
    let mut alpha = vec![0.0; m];
    let mut w = vec![0.0; n];
    let mut t = 0.0f64;
    let mut pivots = 0usize;
    loop {
        mul_binv(&ws.binv, &c0, &mut y0);
        mul_binv(&ws.binv, &dc, &mut dy);
        // leaving: the basic weight that reaches zero first along the segment
        let mut leave = None;
        let mut t_next = 1.0;
        for k in 0..n {
            if dy[k] < -PIVOT_TOL * (1.0 + y0[k].abs()) {
                let tk = (-y0[k] / dy[k]).max(t);
                if tk < t_next || (tk == t_next && leave.is_some_and(|l: usize| dy[k] < dy[l])) {
                    t_next = tk;
                    leave = Some(k);
                }
            }
        }
        let Some(r) = leave else { break };
        t = t_next;
        if pivots >= WARM_PIVOT_CAP {
            return Err(Error::IterationLimit(WARM_PIVOT_CAP));
        }

        let rho = ws.binv[r * n..(r + 1) * n].to_vec();
        g.mul_into(&rho, &mut alpha);
        let mut entering: Option<usize> = None;
        let mut best = f64::INFINITY;
        for j in 0..m {
            if in_basis[j] || alpha[j] >= -PIVOT_TOL {
                continue;
            }
            let ratio = ws.reduced[j].max(0.0) / -alpha[j];
            if ratio < best - 1e-14 || (ratio <= best + 1e-14 && entering.is_some_and(|e| alpha[j] < alpha[e])) {
                best = best.min(ratio);
                entering = Some(j);
            }
        }
        let Some(e) = entering else {
            return Err(Error::Unbounded);
        };

        g.row_into(e, &mut col);
        mul_binv(&ws.binv, &col, &mut w);
        if w[r].abs() < PIVOT_TOL {
            return Err(Error::Numerical("unstable dual simplex pivot".into()));
        }
        let step = best;
        for j in 0..m {
            if !in_basis[j] {
                ws.reduced[j] += step * alpha[j];
            }
        }
        let leaving_row = ws.basis[r];
        ws.reduced[leaving_row] = step;
        ws.reduced[e] = 0.0;
        in_basis[leaving_row] = false;
        in_basis[e] = true;
        ws.basis[r] = e;
        pivot_binv(&mut ws.binv, n, r, &w);
        pivots += 1;
        ws.pivots_since_refactor += 1;
        if ws.pivots_since_refactor >= REFACTOR_EVERY {
            ws.refactor(g)?;
        }
    }

    // The slacks were updated incrementally; certify against fresh ones.
    ws.update_vertex(g);
    let mut sol = match certify(c, g, ws) {
        Ok(sol) => sol,
        Err(_) => {
            ws.refactor(g)?;
            certify(c, g, ws)?
        }
    };
    sol.pivots = pivots;
    Ok(sol)
}

/// Solution of the current basis, after checking primal feasibility of the
/// stored vertex, dual feasibility, `G^T y = c` and a zero duality gap.
fn certify<C: Constraints + ?Sized>(c: &[f64], g: &C, ws: &WarmStart) -> Result<LpSolution> {
    let n = g.num_vars();
    let mut y = vec![0.0; n];
    for k in 0..n {
        y[k] = dot(&ws.binv[k * n..(k + 1) * n], c);
    }
    let value = dot(c, &ws.x);
    let dual_value: f64 = ws.basis.iter().zip(&y).map(|(&j, yj)| g.rhs(j) * yj).sum();
    let duality_gap = (value - dual_value).abs();
    let min_y = y.iter().copied().fold(f64::INFINITY, f64::min);
    let scale = 1.0 + c.iter().fold(0.0f64, |s, v| s.max(v.abs()));

    let fails = |residual: f64| {
        ws.max_violation > CERT_TOL
            || min_y < -CERT_TOL * scale
            || residual > CERT_TOL * scale
            || duality_gap > CERT_TOL * (1.0 + value.abs())
    };
    let mut residual = c.to_vec();
    let mut row = vec![0.0; n];
    for (&j, yj) in ws.basis.iter().zip(&y) {
        g.row_into(j, &mut row);
        for (r, gv) in residual.iter_mut().zip(&row) {
            *r -= yj * gv;
        }
    }
    let residual = residual.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    if fails(residual) {
        return Err(Error::Numerical(format!(
            "optimality certificate failed: violation {:e}, min dual {min_y:e}, \
             residual {residual:e}, gap {duality_gap:e}",
            ws.max_violation
        )));
    }
    Ok(LpSolution {
        x: ws.x.clone(),
        value,
        dual: ws.basis.iter().copied().zip(y).filter(|(_, v)| *v != 0.0).collect(),
        max_violation: ws.max_violation,
        duality_gap,
        pivots: 0,
    })
}

/// `max c.a  s.t.  rows . a <= rhs`, all `rhs > 0`.
pub fn simplex_solve(c: &[f64], rows: &[Vec<f64>], rhs: &[f64]) -> Result<LpSolution> {
    let g = DenseConstraints::new(rows, rhs)?;
    if g.num_rows() > 0 && g.num_vars() != c.len() {
        return Err(Error::arg("objective and constraint widths differ"));
    }
    if g.num_rows() == 0 {
        if c.iter().all(|&v| v == 0.0) {
            return Ok(LpSolution {
                x: vec![0.0; c.len()],
                value: 0.0,
                dual: Vec::new(),
                max_violation: f64::NEG_INFINITY,
                duality_gap: 0.0,
                pivots: 0,
            });
        }
        return Err(Error::Unbounded);
    }
    Ok(solve_lp(c, &g)?.0)
}
