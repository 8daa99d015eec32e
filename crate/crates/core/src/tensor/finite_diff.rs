//! Richardson-extrapolated central differences.
//!
//! Used for fields known only through `f64` samples, and as an independent
//! check on the dual-number backend.

use super::chart::Metric;
use crate::error::Result;
use crate::linalg::Mat;

/// Default relative step.
pub const DEFAULT_STEP: f64 = 1e-4;

/// First derivative of `f` at `x` along coordinate `dir`, with one
/// Richardson step (fourth-order accurate).
pub fn partial<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64], dir: usize, h: f64) -> f64 {
    let central = |step: f64| {
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[dir] += step;
        xm[dir] -= step;
        (f(&xp) - f(&xm)) / (2.0 * step)
    };
    let coarse = central(h);
    let fine = central(0.5 * h);
    (4.0 * fine - coarse) / 3.0
}

/// Second mixed derivative `∂_i ∂_j f` by nested Richardson differences.
pub fn second_partial<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64], i: usize, j: usize, h: f64) -> f64 {
    let inner = |y: &[f64]| partial(f, y, j, h);
    partial(&inner, x, i, h)
}

/// Christoffel symbols `Γ^k_ij` (flattened `[k][i][j]`) from differenced
/// metric components.
pub fn christoffel_fd<M: Metric>(metric: &M, x: &[f64], h: f64) -> Result<Vec<f64>> {
    let n = metric.dim();
    let g = metric.components(x);
    let ginv = g.inverse()?;
    let mut dg: Vec<Mat<f64>> = Vec::with_capacity(n);
    for k in 0..n {
        let scale = h * x[k].abs().max(1.0);
        dg.push(Mat::from_fn(n, |i, j| {
            partial(&|y: &[f64]| metric.components(y)[(i, j)], x, k, scale)
        }));
    }
    let mut out = vec![0.0; n * n * n];
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for l in 0..n {
                    acc += ginv[(k, l)] * 0.5 * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]);
                }
                out[(k * n + i) * n + j] = acc;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivatives_of_smooth_function() {
        let f = |x: &[f64]| x[0].sin() * x[1].exp();
        let x = [0.4, 0.3];
        assert!((partial(&f, &x, 0, 1e-3) - 0.4_f64.cos() * 0.3_f64.exp()).abs() < 1e-11);
        let mixed = second_partial(&f, &x, 0, 1, 1e-3);
        assert!((mixed - 0.4_f64.cos() * 0.3_f64.exp()).abs() < 1e-8);
    }
}
