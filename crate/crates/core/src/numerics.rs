//! Small shared numerical helpers: nonuniform finite-difference weights,
//! logarithmic grids, weighted discrete norms.

use num_complex::Complex64;

/// Logarithmically spaced grid on [r_min, r_max], strictly increasing.
pub fn log_grid(r_min: f64, r_max: f64, n: usize) -> Vec<f64> {
    assert!(r_min > 0.0 && r_max > r_min && n >= 2);
    let (a, b) = (r_min.ln(), r_max.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Finite-difference weights for the m-th derivative at `x0` from the nodes
/// `xs`, by Fornberg's recursion. Exact for polynomials of degree < xs.len().
pub fn fd_weights(x0: f64, xs: &[f64], m: usize) -> Vec<f64> {
    let n = xs.len();
    assert!(m < n);
    let mut c = vec![vec![0.0; m + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}

/// First derivative of sampled complex data on an arbitrary strictly
/// increasing grid, using a centered `stencil`-point rule (one-sided at the
/// ends).
pub fn derivative_nonuniform(grid: &[f64], values: &[Complex64], stencil: usize) -> Vec<Complex64> {
    let n = grid.len();
    assert_eq!(values.len(), n);
    assert!(stencil >= 2 && stencil <= n);
    let half = stencil / 2;
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(half).min(n - stencil);
            let w = fd_weights(grid[i], &grid[lo..lo + stencil], 1);
            w.iter()
                .zip(&values[lo..lo + stencil])
                .map(|(wk, vk)| wk * vk)
                .sum()
        })
        .collect()
}

/// Trapezoidal L² norm with measure weight `w(r) dr`.
pub fn weighted_l2_norm(grid: &[f64], values: &[Complex64], weight: impl Fn(f64) -> f64) -> f64 {
    let mut acc = 0.0;
    for i in 0..grid.len() - 1 {
        let dr = grid[i + 1] - grid[i];
        let a = values[i].norm_sqr() * weight(grid[i]);
        let b = values[i + 1].norm_sqr() * weight(grid[i + 1]);
        acc += 0.5 * (a + b) * dr;
    }
    acc.sqrt()
}

/// Norm over a pair of component families sharing one grid, r²dr measure.
pub fn pair_l2_norm(grid: &[f64], u: &[Complex64], v: &[Complex64]) -> f64 {
    let nu = weighted_l2_norm(grid, u, |r| r * r);
    let nv = weighted_l2_norm(grid, v, |r| r * r);
    (nu * nu + nv * nv).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fd_weights_reproduce_uniform_central() {
        let w = fd_weights(0.0, &[-1.0, 0.0, 1.0], 1);
        assert!((w[0] + 0.5).abs() < 1e-14);
        assert!(w[1].abs() < 1e-14);
        assert!((w[2] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn derivative_of_power_on_log_grid() {
        let grid = log_grid(1e-3, 1.0, 400);
        let vals: Vec<Complex64> = grid
            .iter()
            .map(|&r| Complex64::new(r.powi(3), 0.0))
            .collect();
        let d = derivative_nonuniform(&grid, &vals, 5);
        for (i, &r) in grid.iter().enumerate().skip(3).take(grid.len() - 6) {
            let exact = 3.0 * r * r;
            assert!((d[i].re - exact).abs() / exact < 1e-8, "at r={r}");
        }
    }

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(1e-6, 2.0, 100);
        assert!((g[0] - 1e-6).abs() < 1e-18);
        assert!((g[99] - 2.0).abs() < 1e-12);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }
}
