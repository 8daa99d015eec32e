//! Radial exterior Dirichlet problem `Δ_δΨ = 0`, `Ψ → 1` at infinity.

use serde::{Deserialize, Serialize};

use crate::error::{GeoError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LaplaceGrid {
    /// Number of grid intervals in `t = ln s`.
    pub intervals: usize,
    /// Outer radius as a multiple of the inner radius.
    pub outer_factor: f64,
    /// Largest accepted discretization-error estimate.
    pub tolerance: f64,
}

impl Default for LaplaceGrid {
    fn default() -> Self {
        Self {
            intervals: 20_000,
            outer_factor: 1e3,
            tolerance: 1e-7,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RadialProfile {
    pub n: usize,
    pub s0: f64,
    pub boundary_value: f64,
    #[serde(skip)]
    pub s: Vec<f64>,
    #[serde(skip)]
    pub psi: Vec<f64>,
    /// Richardson estimate of the discretization error.
    pub convergence_estimate: f64,
    /// Least-squares `μ` in `Ψ ≈ 1 + μ s^{2−n}`.
    pub mu: f64,
}

fn thomas(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let m = diag.len();
    let mut c = vec![0.0; m];
    let mut d = vec![0.0; m];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..m {
        let denom = diag[i] - sub[i] * c[i - 1];
        c[i] = if i + 1 < m { sup[i] / denom } else { 0.0 };
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / denom;
    }
    let mut x = vec![0.0; m];
    x[m - 1] = d[m - 1];
    for i in (0..m - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

/// Central differences for `φ_tt + (n−2)φ_t = 0`, `φ = Ψ − 1`, on a uniform
/// grid in `t = ln s`, with the Robin closure `φ_t + (n−2)φ = 0` imposed
/// through a ghost node.
fn solve_raw(n: usize, s0: f64, boundary_value: f64, intervals: usize, outer: f64) -> (Vec<f64>, Vec<f64>) {
    let k = n as f64 - 2.0;
    let t0 = s0.ln();
    let h = outer.ln() / intervals as f64;
    let a = 1.0 / (h * h) - k / (2.0 * h);
    let b = -2.0 / (h * h);
    let c = 1.0 / (h * h) + k / (2.0 * h);
    let m = intervals;
    let mut sub = vec![a; m];
    let mut diag = vec![b; m];
    let mut sup = vec![c; m];
    let mut rhs = vec![0.0; m];
    let phi0 = boundary_value - 1.0;
    rhs[0] = -a * phi0;
    sub[0] = 0.0;
    sub[m - 1] = a + c;
    diag[m - 1] = b - 2.0 * h * k * c;
    sup[m - 1] = 0.0;
    let inner = thomas(&sub, &diag, &sup, &rhs);
    let mut psi = Vec::with_capacity(m + 1);
    psi.push(boundary_value);
    psi.extend(inner.into_iter().map(|v| 1.0 + v));
    let s = (0..=m).map(|i| (t0 + h * i as f64).exp()).collect();
    (s, psi)
}

pub fn solve_exterior_laplace(n: usize, s0: f64, boundary_value: f64, grid: &LaplaceGrid) -> Result<RadialProfile> {
    if n < 3 {
        return Err(GeoError::InvalidParameter(format!("exterior problem needs n ≥ 3, got {n}")));
    }
    if !(s0 > 0.0 && s0.is_finite() && boundary_value.is_finite()) {
        return Err(GeoError::InvalidParameter(format!(
            "need s₀ > 0 and finite data, got s₀ = {s0}, Ψ₀ = {boundary_value}"
        )));
    }
    if grid.intervals < 4 || grid.intervals % 2 != 0 || !(grid.outer_factor > 1.0) {
        return Err(GeoError::InvalidParameter(format!(
            "grid needs an even number of intervals ≥ 4 and outer factor > 1, got {grid:?}"
        )));
    }
    let (s, psi) = solve_raw(n, s0, boundary_value, grid.intervals, grid.outer_factor);
    let (_, coarse) = solve_raw(n, s0, boundary_value, grid.intervals / 2, grid.outer_factor);
    let diff = coarse
        .iter()
        .enumerate()
        .map(|(i, v)| (v - psi[2 * i]).abs())
        .fold(0.0, f64::max);
    let convergence_estimate = diff / 3.0;
    if convergence_estimate > grid.tolerance {
        return Err(GeoError::GridTooCoarse {
            estimate: convergence_estimate,
        });
    }
    let k = n as f64 - 2.0;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (si, pi) in s.iter().zip(&psi) {
        let x = si.powf(-k);
        sxy += x * (pi - 1.0);
        sxx += x * x;
    }
    Ok(RadialProfile {
        n,
        s0,
        boundary_value,
        s,
        psi,
        convergence_estimate,
        mu: sxy / sxx,
    })
}

impl RadialProfile {
    fn k(&self) -> f64 {
        self.n as f64 - 2.0
    }

    /// `ŝ^{n−2} = (Ψ₀ − 1) s₀^{n−2}`.
    pub fn exact_mu(&self) -> f64 {
        (self.boundary_value - 1.0) * self.s0.powf(self.k())
    }

    pub fn closed_form(&self, s: f64) -> f64 {
        1.0 + self.exact_mu() * s.powf(-self.k())
    }

    /// `ŝ` recovered from the profile.
    pub fn s_hat(&self) -> f64 {
        self.mu.max(0.0).powf(1.0 / self.k())
    }

    /// `m̂ = 2ŝ^{n−2}`.
    pub fn mass(&self) -> f64 {
        2.0 * self.mu
    }

    /// Interpolates with the local basis `{1, s^{2−n}}`, exact on the
    /// closed-form family; beyond the grid the Robin tail is used.
    pub fn eval(&self, s: f64) -> f64 {
        let k = self.k();
        let last = self.s.len() - 1;
        if s <= self.s[0] {
            return self.psi[0];
        }
        if s >= self.s[last] {
            return 1.0 + (self.psi[last] - 1.0) * (self.s[last] / s).powf(k);
        }
        let i = self.s.partition_point(|&v| v <= s) - 1;
        let (x0, x1, x) = (self.s[i].powf(-k), self.s[i + 1].powf(-k), s.powf(-k));
        let w = (x - x0) / (x1 - x0);
        self.psi[i] + w * (self.psi[i + 1] - self.psi[i])
    }

    pub fn max_error(&self) -> f64 {
        self.s
            .iter()
            .zip(&self.psi)
            .map(|(s, p)| (p - self.closed_form(*s)).abs())
            .fold(0.0, f64::max)
    }

    /// Rows `(s, Ψ, closed form)`.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.s.iter().zip(&self.psi).map(|(s, p)| (*s, *p, self.closed_form(*s)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horizon_boundary_value() {
        let p = solve_exterior_laplace(3, 0.5, 2.0, &LaplaceGrid::default()).unwrap();
        assert!((p.eval(1.0) - 1.5).abs() < 1e-6);
        assert!(p.max_error() < 1e-6);
        assert!((p.mass() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn unit_boundary_value_is_constant() {
        let p = solve_exterior_laplace(4, 1.3, 1.0, &LaplaceGrid::default()).unwrap();
        assert!(p.psi.iter().all(|v| (v - 1.0).abs() < 1e-15));
        assert_eq!(p.mass(), 0.0);
    }

    #[test]
    fn halving_the_spacing_reduces_the_error() {
        let mut last = f64::INFINITY;
        for intervals in [250, 500, 1000, 2000] {
            let grid = LaplaceGrid {
                intervals,
                tolerance: 1.0,
                ..LaplaceGrid::default()
            };
            let e = solve_exterior_laplace(5, 1.0, 1.7, &grid).unwrap().max_error();
            assert!(e * 3.0 <= last, "{intervals}: {e} vs {last}");
            last = e;
        }
    }

    #[test]
    fn coarse_grid_is_reported() {
        let grid = LaplaceGrid {
            intervals: 8,
            ..LaplaceGrid::default()
        };
        assert!(matches!(
            solve_exterior_laplace(3, 1.0, 3.0, &grid),
            Err(GeoError::GridTooCoarse { .. })
        ));
    }
}
