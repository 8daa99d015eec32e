//! Static triples `(M, g, N)` with declared inner boundary.

use crate::boundary::BoundarySurface;
use crate::error::{GeoError, Result};
use crate::expr::Expr;
use crate::linalg::Mat;
use crate::tensor::chart::{Chart, Metric};
use crate::tensor::curvature::{contract, geometry};
use crate::tensor::operators::scalar_jet;

#[derive(Debug, Clone)]
pub struct StaticTriple {
    pub label: String,
    pub chart: Chart,
    pub lapse: Expr,
    pub boundaries: Vec<BoundarySurface>,
    /// Radial interval used for interior sampling: `|x|` in Cartesian charts,
    /// `r` in polar charts.
    pub sample_shell: (f64, f64),
}

impl StaticTriple {
    pub fn new(
        label: impl Into<String>,
        chart: Chart,
        lapse: Expr,
        boundaries: Vec<BoundarySurface>,
        sample_shell: (f64, f64),
    ) -> Result<Self> {
        let n = chart.dim();
        if n < 3 {
            return Err(GeoError::InvalidParameter(format!(
                "static triples need dimension n ≥ 3, got {n}"
            )));
        }
        if let Some(max) = lapse.max_var() {
            if max >= n {
                return Err(GeoError::InvalidParameter(format!(
                    "lapse references coordinate {max} in dimension {n}"
                )));
            }
        }
        let (lo, hi) = sample_shell;
        if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
            return Err(GeoError::InvalidParameter(format!(
                "sample shell ({lo}, {hi}) is empty"
            )));
        }
        Ok(Self {
            label: label.into(),
            chart,
            lapse,
            boundaries,
            sample_shell,
        })
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn lapse_at(&self, x: &[f64]) -> f64 {
        self.lapse.eval(x)
    }
}

/// Residuals of the static vacuum equations at a point.
#[derive(Debug, Clone)]
pub struct VacuumResidual {
    /// `∇²N − N·Ric`.
    pub hessian: Mat<f64>,
    /// `ΔN`.
    pub laplacian: f64,
}

impl VacuumResidual {
    pub fn max_abs(&self) -> f64 {
        self.hessian.max_abs().max(self.laplacian.abs())
    }
}

/// `(∇²N − N·Ric, ΔN)` at an interior point.
pub fn static_vacuum_residual(triple: &StaticTriple, x: &[f64]) -> Result<VacuumResidual> {
    let chart = &triple.chart;
    chart.validate_point(x)?;
    let (value, grad, second) = scalar_jet(&triple.lapse, x);
    if !value.is_finite() {
        return Err(GeoError::InvalidParameter(format!("lapse is not finite at {x:?}")));
    }
    let geo = geometry(chart, x)?;
    let n = chart.dim();
    let hess = Mat::from_fn(n, |i, j| {
        let mut v = second[(i, j)];
        for (k, &dk) in grad.iter().enumerate() {
            v -= geo.gamma.get(k, i, j) * dk;
        }
        v
    });
    let laplacian = contract(&geo.jet.ginv, &hess);
    let residual = Mat::from_fn(n, |i, j| hess[(i, j)] - value * geo.ricci[(i, j)]);
    Ok(VacuumResidual {
        hessian: residual,
        laplacian,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::euclidean_radius;

    fn flat(lapse: Expr) -> StaticTriple {
        StaticTriple::new("flat", Chart::euclidean(3), lapse, vec![], (1.0, 2.0)).unwrap()
    }

    #[test]
    fn constant_lapse_on_flat_space_is_exactly_vacuum() {
        let r = static_vacuum_residual(&flat(Expr::one()), &[0.3, 0.2, 1.0]).unwrap();
        assert_eq!(r.max_abs(), 0.0);
    }

    #[test]
    fn quadratic_lapse_is_not_harmonic() {
        let r = static_vacuum_residual(&flat(euclidean_radius(3).powf(2.0)), &[0.3, 0.2, 1.0]).unwrap();
        assert!((r.laplacian - 6.0).abs() < 1e-13);
    }

    #[test]
    fn two_dimensional_charts_are_rejected() {
        assert!(StaticTriple::new("bad", Chart::euclidean(2), Expr::one(), vec![], (1.0, 2.0)).is_err());
    }
}
