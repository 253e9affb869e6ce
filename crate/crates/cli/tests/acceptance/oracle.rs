//! Reference computations that share no code with the library.

use nldiff_core::HarmonicBasis;

/// Dense Gaussian elimination with partial pivoting.
pub fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))
            .unwrap();
        a.swap(k, p);
        b.swap(k, p);
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            if f == 0.0 {
                continue;
            }
            for j in k..n {
                a[i][j] -= f * a[k][j];
            }
            b[i] -= f * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| a[k][j] * x[j]).sum();
        x[k] = (b[k] - s) / a[k][k];
    }
    x
}

fn kink(p: f64, q: f64) -> Option<f64> {
    (p * q < 0.0).then(|| p / (p - q))
}

fn pieces(cut: Option<f64>) -> Vec<(f64, f64)> {
    match cut {
        Some(t) => vec![(0.0, t), (t, 1.0)],
        None => vec![(0.0, 1.0)],
    }
}

/// `int int |P_x| + |P_y|` over the unit cell by a 64 x 64 midpoint rule on
/// each piece between kinks, where the integrand is affine and the rule exact.
pub fn cell_tv_quadrature(u00: f64, u10: f64, u01: f64, u11: f64) -> f64 {
    const N: usize = 64;
    let px = |y: f64| (1.0 - y) * (u10 - u00) + y * (u11 - u01);
    let py = |x: f64| (1.0 - x) * (u01 - u00) + x * (u11 - u10);
    let xs = pieces(kink(u01 - u00, u11 - u10));
    let ys = pieces(kink(u10 - u00, u11 - u01));
    let mut total = 0.0;
    for &(x0, x1) in &xs {
        for &(y0, y1) in &ys {
            let (dx, dy) = ((x1 - x0) / N as f64, (y1 - y0) / N as f64);
            let mut s = 0.0;
            for i in 0..N {
                let x = x0 + (i as f64 + 0.5) * dx;
                for j in 0..N {
                    let y = y0 + (j as f64 + 0.5) * dy;
                    s += px(y).abs() + py(x).abs();
                }
            }
            total += s * dx * dy;
        }
    }
    total
}

/// Fourth-order five-point Laplacian of basis function `h`.
pub fn fd_laplacian(basis: &HarmonicBasis, h: usize, x: f64, y: f64, d: f64) -> f64 {
    let f = |x: f64, y: f64| basis.value(h, x, y);
    let axis = |g: &dyn Fn(f64) -> f64| {
        (-g(2.0 * d) + 16.0 * g(d) - 30.0 * g(0.0) + 16.0 * g(-d) - g(-2.0 * d)) / (12.0 * d * d)
    };
    axis(&|t| f(x + t, y)) + axis(&|t| f(x, y + t))
}

/// Constraint rows `(+-f_x +- f_y)(y_l)` of the normalized basis, sign order
/// `(+,+), (+,-), (-,+), (-,-)` per mesh point.
pub fn constraint_rows(basis: &HarmonicBasis, mesh: &[[f64; 2]]) -> Vec<Vec<f64>> {
    let n = basis.len();
    let grads: Vec<Vec<[f64; 2]>> = mesh
        .iter()
        .map(|p| (0..n).map(|h| basis.gradient(h, p[0], p[1])).collect())
        .collect();
    let scale: Vec<f64> = (0..n)
        .map(|h| {
            1.0 / grads
                .iter()
                .map(|g| g[h][0].abs() + g[h][1].abs())
                .fold(0.0, f64::max)
        })
        .collect();
    let mut rows = Vec::with_capacity(4 * mesh.len());
    for g in &grads {
        for (sx, sy) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
            rows.push((0..n).map(|h| scale[h] * (sx * g[h][0] + sy * g[h][1])).collect());
        }
    }
    rows
}

/// Largest `row . x - 1`.
pub fn max_violation(rows: &[Vec<f64>], x: &[f64]) -> f64 {
    rows.iter()
        .map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() - 1.0)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Every vertex of `{x in R^3 : rows x <= 1}`.
pub fn vertices_3d(rows: &[Vec<f64>]) -> Vec<[f64; 3]> {
    let m = rows.len();
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let a = [&rows[i], &rows[j], &rows[k]];
                let det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
                    - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                    + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
                if det.abs() < 1e-12 {
                    continue;
                }
                let x = dense_solve(a.iter().map(|r| r.to_vec()).collect(), vec![1.0; 3]);
                if max_violation(rows, &x) <= 1e-10 {
                    out.push([x[0], x[1], x[2]]);
                }
            }
        }
    }
    out
}
