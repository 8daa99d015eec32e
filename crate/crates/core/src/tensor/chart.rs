//! Coordinate charts and the [`Metric`] abstraction.

use crate::autodiff::{seed, Scalar};
use crate::error::{GeoError, Result};
use crate::expr::Expr;
use crate::linalg::Mat;

/// How the coordinates relate to the asymptotic end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Layout {
    /// Cartesian-like coordinates; the asymptotic end is `|x| → ∞`.
    Cartesian,
    /// `(r, θ1, …, θ_{n-2}, φ)` with the round metric
    /// `dθ1² + sin²θ1 dθ2² + …`; the asymptotic end is `r → ∞`.
    Polar,
}

/// Distance kept from finite domain bounds.
pub const DEGENERACY_MARGIN: f64 = 1e-6;

/// Product of open coordinate intervals, optionally intersected with an open
/// Euclidean shell `lo < |x| < hi` for Cartesian charts.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    pub bounds: Vec<(f64, f64)>,
    pub radial: Option<(f64, f64)>,
}

fn inside(v: f64, (lo, hi): (f64, f64)) -> bool {
    let margin = |b: f64| DEGENERACY_MARGIN * b.abs().max(1.0);
    let above = lo == f64::NEG_INFINITY || v > lo + margin(lo);
    let below = hi == f64::INFINITY || v < hi - margin(hi);
    v.is_finite() && above && below
}

impl Domain {
    pub fn unbounded(n: usize) -> Self {
        Self {
            bounds: vec![(f64::NEG_INFINITY, f64::INFINITY); n],
            radial: None,
        }
    }

    pub fn with_radial(mut self, lo: f64, hi: f64) -> Self {
        self.radial = Some((lo, hi));
        self
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        if x.len() != self.bounds.len() {
            return false;
        }
        if !x.iter().zip(&self.bounds).all(|(&v, &b)| inside(v, b)) {
            return false;
        }
        match self.radial {
            Some(b) => inside(x.iter().map(|v| v * v).sum::<f64>().sqrt(), b),
            None => true,
        }
    }

    pub fn check(&self, x: &[f64]) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(GeoError::PointOutsideDomain(x.to_vec()))
        }
    }
}

/// A Riemannian metric given in coordinates.
///
/// `components` must be generic so that evaluating at dual numbers yields
/// exact derivatives of the metric.
pub trait Metric: Sync {
    fn dim(&self) -> usize;
    fn components<S: Scalar>(&self, x: &[S]) -> Mat<S>;
    fn domain(&self) -> &Domain;
    fn layout(&self) -> Layout {
        Layout::Cartesian
    }

    /// Checks the domain and positive definiteness at an `f64` point.
    fn validate_point(&self, x: &[f64]) -> Result<Mat<f64>> {
        if x.len() != self.dim() {
            return Err(GeoError::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        self.domain().check(x)?;
        let g = self.components(x);
        let min_eigenvalue = g.eigenvalues_symmetric()[0];
        if !(min_eigenvalue > 0.0) {
            return Err(GeoError::NotPositiveDefinite {
                point: x.to_vec(),
                min_eigenvalue,
            });
        }
        Ok(g)
    }
}

impl<M: Metric> Metric for &M {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn components<S: Scalar>(&self, x: &[S]) -> Mat<S> {
        (**self).components(x)
    }
    fn domain(&self) -> &Domain {
        (**self).domain()
    }
    fn layout(&self) -> Layout {
        (**self).layout()
    }
}

/// Metric whose components are closed-form expressions in the coordinates.
#[derive(Debug, Clone)]
pub struct Chart {
    pub kind: String,
    pub coordinate_names: Vec<String>,
    components: Vec<Expr>,
    pub domain: Domain,
    pub layout: Layout,
}

impl Chart {
    /// Builds a chart from the upper triangle (row-major, `i <= j`) or a
    /// full `n×n` list of component expressions.
    pub fn new(
        kind: impl Into<String>,
        coordinate_names: Vec<String>,
        components: Vec<Vec<Expr>>,
        domain: Domain,
        layout: Layout,
    ) -> Result<Self> {
        let n = coordinate_names.len();
        if n < 2 {
            return Err(GeoError::InvalidParameter(format!(
                "chart dimension must be at least 2, got {n}"
            )));
        }
        if components.len() != n || domain.bounds.len() != n {
            return Err(GeoError::DimensionMismatch {
                expected: n,
                got: components.len().min(domain.bounds.len()),
            });
        }
        let mut full = vec![Expr::zero(); n * n];
        for (i, row) in components.iter().enumerate() {
            match row.len() {
                len if len == n => {
                    for (j, e) in row.iter().enumerate() {
                        full[i * n + j] = e.clone();
                    }
                }
                len if len == n - i => {
                    for (k, e) in row.iter().enumerate() {
                        full[i * n + i + k] = e.clone();
                        full[(i + k) * n + i] = e.clone();
                    }
                }
                len => {
                    return Err(GeoError::DimensionMismatch {
                        expected: n,
                        got: len,
                    })
                }
            }
        }
        if let Some(max) = full.iter().filter_map(Expr::max_var).max() {
            if max >= n {
                return Err(GeoError::InvalidParameter(format!(
                    "metric references coordinate index {max} in a {n}-dimensional chart"
                )));
            }
        }
        Ok(Self {
            kind: kind.into(),
            coordinate_names,
            components: full,
            domain,
            layout,
        })
    }

    /// Diagonal metric `diag(entries)`.
    pub fn diagonal(
        kind: impl Into<String>,
        coordinate_names: Vec<String>,
        entries: Vec<Expr>,
        domain: Domain,
        layout: Layout,
    ) -> Result<Self> {
        let n = entries.len();
        let rows = entries
            .into_iter()
            .enumerate()
            .map(|(i, e)| {
                let mut row = vec![Expr::zero(); n];
                row[i] = e;
                row
            })
            .collect();
        Self::new(kind, coordinate_names, rows, domain, layout)
    }

    /// Flat metric `δ` in Cartesian coordinates `x1..xn`.
    pub fn euclidean(n: usize) -> Self {
        Self::diagonal(
            "euclidean-cartesian",
            cartesian_names(n),
            vec![Expr::one(); n],
            Domain::unbounded(n),
            Layout::Cartesian,
        )
        .expect("well-formed euclidean chart")
    }

    /// Euclidean metric in polar coordinates `dr² + r² g_S`.
    pub fn euclidean_polar(n: usize) -> Self {
        let r = Expr::var(0);
        let mut entries = vec![Expr::one()];
        entries.extend(
            round_sphere_factors(n - 1, 1)
                .into_iter()
                .map(|f| r.clone().powf(2.0) * f),
        );
        Self::diagonal(
            "euclidean-polar",
            polar_names(n),
            entries,
            polar_domain(n, 0.0),
            Layout::Polar,
        )
        .expect("well-formed polar chart")
    }

    pub fn component(&self, i: usize, j: usize) -> &Expr {
        &self.components[i * self.dim() + j]
    }

    /// Chart with every component multiplied by `factor`.
    pub fn conformal(&self, factor: &Expr, kind: impl Into<String>) -> Self {
        Self {
            kind: kind.into(),
            coordinate_names: self.coordinate_names.clone(),
            components: self
                .components
                .iter()
                .map(|c| {
                    if c.is_zero() {
                        Expr::zero()
                    } else {
                        factor.clone() * c.clone()
                    }
                })
                .collect(),
            domain: self.domain.clone(),
            layout: self.layout,
        }
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }
}

impl Metric for Chart {
    fn dim(&self) -> usize {
        self.coordinate_names.len()
    }

    fn components<S: Scalar>(&self, x: &[S]) -> Mat<S> {
        let n = self.dim();
        let mut g = Mat::zeros(n);
        for i in 0..n {
            for j in i..n {
                let e = &self.components[i * n + j];
                if e.is_zero() {
                    continue;
                }
                let v = e.eval(x);
                g[(i, j)] = v;
                g[(j, i)] = v;
            }
        }
        g
    }

    fn domain(&self) -> &Domain {
        &self.domain
    }

    fn layout(&self) -> Layout {
        self.layout
    }
}

/// Pullback of a metric along a coordinate map `u ↦ F(u)`.
///
/// Used for induced metrics on hypersurfaces and for changes of chart.
#[derive(Debug, Clone)]
pub struct Pullback<M> {
    pub base: M,
    pub map: Vec<Expr>,
    dim: usize,
    pub domain: Domain,
    pub layout: Layout,
}

impl<M: Metric> Pullback<M> {
    pub fn new(base: M, map: Vec<Expr>, dim: usize, domain: Domain, layout: Layout) -> Result<Self> {
        if map.len() != base.dim() {
            return Err(GeoError::DimensionMismatch {
                expected: base.dim(),
                got: map.len(),
            });
        }
        if domain.bounds.len() != dim {
            return Err(GeoError::DimensionMismatch {
                expected: dim,
                got: domain.bounds.len(),
            });
        }
        Ok(Self {
            base,
            map,
            dim,
            domain,
            layout,
        })
    }

    /// Image point and Jacobian `∂F^k/∂u^a` (stored `[k][a]`).
    pub fn map_jet<S: Scalar>(&self, u: &[S]) -> (Vec<S>, Vec<Vec<S>>) {
        map_jet(&self.map, u)
    }
}

/// Value and Jacobian `[k][a]` of an expression map.
pub fn map_jet<S: Scalar>(map: &[Expr], u: &[S]) -> (Vec<S>, Vec<Vec<S>>) {
    let mut point = vec![S::zero(); map.len()];
    let mut jac = vec![vec![S::zero(); u.len()]; map.len()];
    if u.is_empty() {
        for (k, f) in map.iter().enumerate() {
            point[k] = f.eval(u);
        }
        return (point, jac);
    }
    for a in 0..u.len() {
        let seeded = seed(u, a);
        for (k, f) in map.iter().enumerate() {
            let v = f.eval(&seeded);
            point[k] = v.re;
            jac[k][a] = v.eps;
        }
    }
    (point, jac)
}

impl<M: Metric> Metric for Pullback<M> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn components<S: Scalar>(&self, u: &[S]) -> Mat<S> {
        let (point, jac) = self.map_jet(u);
        let g = self.base.components(&point);
        let n = self.base.dim();
        let d = self.dim;
        let mut out = Mat::zeros(d);
        for a in 0..d {
            for b in a..d {
                let mut acc = S::zero();
                for k in 0..n {
                    let mut row = S::zero();
                    for l in 0..n {
                        row += g[(k, l)] * jac[l][b];
                    }
                    acc += jac[k][a] * row;
                }
                out[(a, b)] = acc;
                out[(b, a)] = acc;
            }
        }
        out
    }

    fn domain(&self) -> &Domain {
        &self.domain
    }

    fn layout(&self) -> Layout {
        self.layout
    }
}

pub fn cartesian_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

/// `r, theta1, …, theta_{n-2}, phi`.
pub fn polar_names(n: usize) -> Vec<String> {
    let mut names = vec!["r".to_string()];
    names.extend((1..n - 1).map(|i| format!("theta{i}")));
    names.push("phi".to_string());
    names
}

/// Diagonal entries of the unit round metric on `S^d` in hyperspherical
/// angles whose variables start at index `offset`.
pub fn round_sphere_factors(d: usize, offset: usize) -> Vec<Expr> {
    let mut factors = Vec::with_capacity(d);
    let mut acc = Expr::one();
    for a in 0..d {
        factors.push(acc.clone());
        if a + 1 < d {
            acc = acc * Expr::var(offset + a).sin().powf(2.0);
        }
    }
    factors
}

/// Domain `r > r_min` with polar angles in `(0, π)` and free azimuth.
pub fn polar_domain(n: usize, r_min: f64) -> Domain {
    let mut bounds = vec![(r_min, f64::INFINITY)];
    bounds.extend((1..n - 1).map(|_| (0.0, std::f64::consts::PI)));
    bounds.push((f64::NEG_INFINITY, f64::INFINITY));
    Domain {
        bounds,
        radial: None,
    }
}

/// Unit-sphere embedding `S^{d} → R^{d+1}` in hyperspherical angles starting
/// at variable `offset`.
pub fn unit_sphere_map(d: usize, offset: usize) -> Vec<Expr> {
    let mut out = Vec::with_capacity(d + 1);
    let mut prefix = Expr::one();
    for a in 0..d {
        let angle = Expr::var(offset + a);
        out.push(prefix.clone() * angle.cos());
        prefix = prefix * angle.sin();
    }
    out.push(prefix);
    out
}

/// Map from Cartesian coordinates to hyperspherical polar coordinates.
pub fn cartesian_to_polar_map(n: usize) -> Vec<Expr> {
    let x: Vec<Expr> = (0..n).map(Expr::var).collect();
    let r = crate::expr::euclidean_radius(n);
    let mut out = vec![r];
    for a in 0..n - 2 {
        let tail = Expr::sum(x[a + 1..].iter().map(|v| v.clone().powf(2.0))).sqrt();
        out.push(tail.atan2(&x[a]));
    }
    out.push(x[n - 1].atan2(&x[n - 2]));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn upper_triangle_is_mirrored() {
        let chart = Chart::new(
            "test",
            cartesian_names(2),
            vec![
                vec![Expr::one(), Expr::var(0)],
                vec![Expr::constant(2.0)],
            ],
            Domain::unbounded(2),
            Layout::Cartesian,
        )
        .unwrap();
        let g = chart.components(&[0.5, 0.0]);
        assert_eq!(g[(0, 1)], 0.5);
        assert_eq!(g[(1, 0)], 0.5);
        assert_eq!(g[(1, 1)], 2.0);
    }

    #[test]
    fn domain_margin_rejects_boundary_points() {
        let d = polar_domain(3, 2.0);
        assert!(!d.contains(&[2.0, 1.0, 0.0]));
        assert!(!d.contains(&[2.0 + 1e-7, 1.0, 0.0]));
        assert!(d.contains(&[2.01, 1.0, 0.0]));
        assert!(!d.contains(&[3.0, 0.0, 0.0]));
    }

    #[test]
    fn out_of_range_variable_rejected() {
        let res = Chart::diagonal(
            "bad",
            cartesian_names(2),
            vec![Expr::var(2), Expr::one()],
            Domain::unbounded(2),
            Layout::Cartesian,
        );
        assert!(res.is_err());
    }

    #[test]
    fn non_positive_metric_rejected_at_point() {
        let chart = Chart::diagonal(
            "bad",
            cartesian_names(2),
            vec![Expr::var(0), Expr::one()],
            Domain::unbounded(2),
            Layout::Cartesian,
        )
        .unwrap();
        assert!(matches!(
            chart.validate_point(&[-1.0, 0.0]),
            Err(GeoError::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn polar_map_inverts_sphere_map() {
        let u = [0.7, 1.1, -2.0];
        let sphere = unit_sphere_map(3, 1);
        let x: Vec<f64> = sphere
            .iter()
            .map(|e| 2.5 * e.eval(&[0.0, u[0], u[1], u[2]]))
            .collect();
        let polar = cartesian_to_polar_map(4);
        let back: Vec<f64> = polar.iter().map(|e| e.eval(&x)).collect();
        assert!((back[0] - 2.5).abs() < 1e-14);
        assert!((back[1] - u[0]).abs() < 1e-14);
        assert!((back[2] - u[1]).abs() < 1e-14);
        assert!((back[3] - u[2]).abs() < 1e-14);
    }

    #[test]
    fn pullback_of_flat_metric_by_sphere_map_is_round() {
        let map: Vec<Expr> = unit_sphere_map(2, 0)
            .into_iter()
            .map(|e| e * 3.0)
            .collect();
        let pb = Pullback::new(
            Chart::euclidean(3),
            map,
            2,
            Domain {
                bounds: vec![(0.0, std::f64::consts::PI), (f64::NEG_INFINITY, f64::INFINITY)],
                radial: None,
            },
            Layout::Polar,
        )
        .unwrap();
        let g = pb.components(&[0.4, 1.0]);
        assert!((g[(0, 0)] - 9.0).abs() < 1e-13);
        assert!((g[(1, 1)] - 9.0 * 0.4_f64.sin().powi(2)).abs() < 1e-13);
        assert!(g[(0, 1)].abs() < 1e-13);
    }
}
