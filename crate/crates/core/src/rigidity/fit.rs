//! Least-squares fit of `Φ₊^{−1}` against `1 + μ s^{2−n}`, with `s` the
//! areal radius of `g⁺`.

use serde::Serialize;

use crate::conformal::ConformalPair;
use crate::error::{GeoError, Result};
use crate::sampling::halton_shell_points;
use crate::tensor::chart::{Layout, Metric};
use crate::triple::StaticTriple;

#[derive(Debug, Clone, Serialize)]
pub struct SchwarzschildFit {
    pub mass: f64,
    pub mu: f64,
    /// Largest `|Ψ − 1 − μ s^{2−n}|` over the samples.
    pub fit_residual: f64,
    /// Largest `|g_ij − Ψ_fit^{4/(n−2)} g⁺_ij|` over the samples.
    pub max_deviation: f64,
    pub points: usize,
}

/// Areal radius of `g⁺` at `x`, read off a direction tangent to the
/// coordinate sphere through `x`.
pub fn tangential_radius<M: Metric>(metric: &M, x: &[f64]) -> f64 {
    let g = metric.components(x);
    match metric.layout() {
        Layout::Polar => g[(1, 1)].sqrt(),
        Layout::Cartesian => {
            let n = x.len();
            let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            let axis = (0..n)
                .min_by(|&a, &b| x[a].abs().total_cmp(&x[b].abs()))
                .unwrap_or(0);
            let mut t: Vec<f64> = (0..n).map(|i| -x[axis] * x[i] / (r * r)).collect();
            t[axis] += 1.0;
            let len = t.iter().map(|v| v * v).sum::<f64>().sqrt();
            t.iter_mut().for_each(|v| *v /= len);
            r * g.form(&t, &t).sqrt()
        }
    }
}

pub fn schwarzschild_fit(triple: &StaticTriple, g_plus: &ConformalPair, count: usize) -> Result<SchwarzschildFit> {
    let n = triple.dim();
    let k = n as f64 - 2.0;
    let points: Vec<Vec<f64>> = halton_shell_points(count, n, triple.chart.layout, triple.sample_shell)
        .into_iter()
        .filter(|x| triple.chart.domain.contains(x))
        .collect();
    if points.is_empty() {
        return Err(GeoError::Precondition("no interior sample points for the fit".into()));
    }
    let samples: Vec<(f64, f64)> = points
        .iter()
        .map(|x| {
            let s = tangential_radius(&g_plus.derived, x);
            (s.powf(-k), 1.0 / g_plus.factor_at(x) - 1.0)
        })
        .collect();
    let sxy: f64 = samples.iter().map(|(x, y)| x * y).sum();
    let sxx: f64 = samples.iter().map(|(x, _)| x * x).sum();
    let mu = sxy / sxx;
    let fit_residual = samples.iter().map(|(x, y)| (y - mu * x).abs()).fold(0.0, f64::max);
    let mut max_deviation: f64 = 0.0;
    for (x, (xs, _)) in points.iter().zip(&samples) {
        let g = triple.chart.components(x.as_slice());
        let gp = g_plus.derived.components(x.as_slice());
        let psi = (1.0 + mu * xs).powf(4.0 / k);
        for i in 0..n {
            for j in 0..n {
                max_deviation = max_deviation.max((g[(i, j)] - psi * gp[(i, j)]).abs());
            }
        }
    }
    Ok(SchwarzschildFit {
        mass: 2.0 * mu,
        mu,
        fit_residual,
        max_deviation,
        points: points.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conformal::build_g_plus;
    use crate::expr::Expr;
    use crate::schwarzschild::SchwarzschildModel;
    use crate::tensor::chart::Chart;

    #[test]
    fn self_fits() {
        for (n, m) in [(3, 1.0), (4, 2.0)] {
            let s = SchwarzschildModel::new(n, m).unwrap();
            for t in [s.isotropic_triple(None).unwrap(), s.areal_triple(None).unwrap()] {
                let f = schwarzschild_fit(&t, &build_g_plus(&t).unwrap(), 64).unwrap();
                assert!((f.mass - m).abs() < 1e-8, "{}: {f:?}", t.label);
                assert!(f.max_deviation < 1e-7, "{}: {f:?}", t.label);
            }
        }
    }

    #[test]
    fn flat_unit_lapse_has_zero_mass() {
        let t = StaticTriple::new("flat", Chart::euclidean(3), Expr::one(), vec![], (1.0, 3.0)).unwrap();
        let f = schwarzschild_fit(&t, &build_g_plus(&t).unwrap(), 32).unwrap();
        assert_eq!((f.mass, f.max_deviation), (0.0, 0.0));
    }
}
