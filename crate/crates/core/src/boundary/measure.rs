//! Sampling the extrinsic and intrinsic geometry of a hypersurface at
//! quadrature nodes.

use rayon::prelude::*;
use serde::Serialize;

use super::quadrature::{default_orders, product_gauss_legendre, rotated_sphere_rule};
use super::surface::{angular_box, BoundarySurface, Orientation};
use crate::error::{GeoError, Result};
use crate::expr::Expr;
use crate::linalg::Mat;
use crate::tensor::chart::{Layout, Metric, Pullback};
use crate::tensor::curvature::{christoffel, geometry};
use crate::tensor::fields::{value_and_gradient, ScalarField};
use crate::tensor::operators::scalar_jet;
use crate::triple::StaticTriple;

/// Geometry at one quadrature node.
#[derive(Debug, Clone)]
pub struct NodeSample {
    pub param: Vec<f64>,
    pub point: Vec<f64>,
    /// Surface measure weight `w·√det ḡ`.
    pub weight: f64,
    pub induced: Mat<f64>,
    pub second_fundamental_form: Mat<f64>,
    pub normal: Vec<f64>,
    pub mean_curvature: f64,
    pub lapse: f64,
    pub normal_derivative: f64,
    /// Intrinsic scalar curvature, from the Gauss equation
    /// `S̄ = R − 2Ric(ν,ν) + H² − |II|²`.
    pub scalar: f64,
    /// The same quantity computed directly from the induced metric in the
    /// surface parameters. Loses digits near coordinate poles.
    pub coordinate_scalar: f64,
    /// `‖II − (H/(n−1)) ḡ‖_ḡ`.
    pub umbilicity: f64,
}

/// Weighted mean and range of a nodal field.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FieldStats {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

impl FieldStats {
    pub fn spread(&self) -> f64 {
        self.max - self.min
    }

    /// `(max − min)/|mean|`, or the absolute spread when the mean vanishes.
    pub fn relative_spread(&self) -> f64 {
        if self.mean.abs() > f64::MIN_POSITIVE {
            self.spread() / self.mean.abs()
        } else {
            self.spread()
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.min.abs().max(self.max.abs())
    }
}

#[derive(Debug, Clone)]
pub struct BoundaryData {
    pub label: String,
    pub n: usize,
    pub topology: String,
    pub orders: Vec<usize>,
    pub nodes: Vec<NodeSample>,
    pub area: f64,
}

impl BoundaryData {
    fn stats(&self, f: impl Fn(&NodeSample) -> f64) -> FieldStats {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        let mut acc = 0.0;
        for s in &self.nodes {
            let v = f(s);
            min = min.min(v);
            max = max.max(v);
            acc += v * s.weight;
        }
        FieldStats {
            mean: acc / self.area,
            min,
            max,
        }
    }

    pub fn mean_curvature(&self) -> FieldStats {
        self.stats(|s| s.mean_curvature)
    }

    pub fn lapse(&self) -> FieldStats {
        self.stats(|s| s.lapse)
    }

    pub fn normal_derivative(&self) -> FieldStats {
        self.stats(|s| s.normal_derivative)
    }

    pub fn scalar(&self) -> FieldStats {
        self.stats(|s| s.scalar)
    }

    pub fn max_umbilicity(&self) -> f64 {
        self.nodes.iter().fold(0.0, |a, s| a.max(s.umbilicity))
    }

    /// Largest `|II|_ḡ` over nodes.
    pub fn max_second_fundamental_form(&self) -> f64 {
        self.nodes.iter().fold(0.0, |a, s| {
            let ginv = s.induced.inverse().unwrap_or_else(|_| Mat::zeros(s.induced.dim()));
            a.max(crate::tensor::curvature::norm_sq(&ginv, &s.second_fundamental_form).sqrt())
        })
    }

    /// Largest disagreement between the Gauss-equation and coordinate
    /// scalar curvature.
    pub fn gauss_equation_defect(&self) -> f64 {
        self.nodes.iter().fold(0.0, |a, s| a.max((s.scalar - s.coordinate_scalar).abs()))
    }

    /// `∫ f dA`.
    pub fn integrate(&self, f: impl Fn(&NodeSample) -> f64) -> f64 {
        self.nodes.iter().map(|s| f(s) * s.weight).sum()
    }
}

/// Determinant of a small dense matrix given by rows.
fn det(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    if n == 0 {
        return 1.0;
    }
    Mat::from_fn(n, |i, j| rows[i][j]).det()
}

/// Covector annihilating the columns of `jac` (`[k][a]`, `n × (n−1)`).
fn normal_covector(jac: &[Vec<f64>]) -> Vec<f64> {
    let n = jac.len();
    (0..n)
        .map(|k| {
            let minor: Vec<Vec<f64>> = jac
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != k)
                .map(|(_, r)| r.clone())
                .collect();
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * det(&minor)
        })
        .collect()
}

fn measure_node<M: Metric, F: ScalarField>(
    metric: &M,
    lapse: &F,
    map: &[Expr],
    induced_metric: &Pullback<&M>,
    surface: &BoundarySurface,
    center: &[f64],
    u: &[f64],
    w: f64,
) -> Result<NodeSample> {
    let n = metric.dim();
    let d = n - 1;
    let mut point = vec![0.0; n];
    let mut jac = vec![vec![0.0; d]; n];
    let mut hess = Vec::with_capacity(n);
    for (k, f) in map.iter().enumerate() {
        let (v, grad, second) = scalar_jet(f, u);
        point[k] = v;
        jac[k] = grad;
        hess.push(second);
    }
    if !metric.domain().contains(&point) {
        return Err(GeoError::PointOutsideDomain(point));
    }
    let (jet, gamma) = christoffel(metric, &point)?;
    let g = &jet.g;
    let induced = Mat::from_fn(d, |a, b| {
        let ea: Vec<f64> = (0..n).map(|k| jac[k][a]).collect();
        let eb: Vec<f64> = (0..n).map(|k| jac[k][b]).collect();
        g.form(&ea, &eb)
    });
    let (ginv_bar, det_bar) = induced
        .inverse_and_det()
        .map_err(|_| GeoError::DegenerateSurface(format!("singular induced metric at {u:?}")))?;
    if !(det_bar > 0.0) {
        return Err(GeoError::DegenerateSurface(format!(
            "induced metric not positive at {u:?}"
        )));
    }

    let omega = normal_covector(&jac);
    let raised = jet.ginv.mul_vec(&omega);
    let len_sq: f64 = omega.iter().zip(&raised).map(|(a, b)| a * b).sum();
    if !(len_sq > 0.0) {
        return Err(GeoError::DegenerateSurface(format!("normal undefined at {u:?}")));
    }
    let len = len_sq.sqrt();
    let mut normal: Vec<f64> = raised.iter().map(|v| v / len).collect();
    let mut normal_low: Vec<f64> = omega.iter().map(|v| v / len).collect();
    let outward = match metric.layout() {
        Layout::Cartesian => point
            .iter()
            .zip(center)
            .zip(&normal)
            .map(|((x, c), v)| (x - c) * v)
            .sum::<f64>(),
        Layout::Polar => normal[0],
    };
    let flip = (outward < 0.0) ^ (surface.orientation == Orientation::TowardInterior);
    if flip {
        normal.iter_mut().for_each(|v| *v = -*v);
        normal_low.iter_mut().for_each(|v| *v = -*v);
    }

    let sff = Mat::from_fn(d, |a, b| {
        let mut acc = 0.0;
        for k in 0..n {
            let mut accel = hess[k][(a, b)];
            for i in 0..n {
                for j in 0..n {
                    accel += gamma.get(k, i, j) * jac[i][a] * jac[j][b];
                }
            }
            acc += normal_low[k] * accel;
        }
        -acc
    });
    let h = crate::tensor::curvature::contract(&ginv_bar, &sff);
    let traceless = Mat::from_fn(d, |a, b| sff[(a, b)] - h / d as f64 * induced[(a, b)]);
    let umbilicity = crate::tensor::curvature::norm_sq(&ginv_bar, &traceless)
        .max(0.0)
        .sqrt();
    let sff_sq = crate::tensor::curvature::norm_sq(&ginv_bar, &sff);

    let (lapse_value, dn) = value_and_gradient(lapse, &point);
    let normal_derivative: f64 = dn.iter().zip(&normal).map(|(a, b)| a * b).sum();

    let ambient = geometry(metric, point.as_slice())?;
    let ric_nn = ambient.ricci.form(&normal, &normal);
    let scalar = ambient.scalar - 2.0 * ric_nn + h * h - sff_sq;
    let coordinate_scalar = if d >= 2 {
        geometry(induced_metric, u)?.scalar
    } else {
        0.0
    };

    Ok(NodeSample {
        param: u.to_vec(),
        point,
        weight: w * det_bar.sqrt(),
        induced,
        second_fundamental_form: sff,
        normal,
        mean_curvature: h,
        lapse: lapse_value,
        normal_derivative,
        scalar,
        coordinate_scalar,
        umbilicity,
    })
}

/// Measures `surface` in an arbitrary metric with lapse `lapse`.
pub fn measure_surface<M: Metric, F: ScalarField>(
    metric: &M,
    lapse: &F,
    surface: &BoundarySurface,
) -> Result<BoundaryData> {
    let n = metric.dim();
    if n < 2 {
        return Err(GeoError::InvalidParameter("ambient dimension must be at least 2".into()));
    }
    let (map, bounds) = surface.parametrization(n, metric.layout())?;
    let orders = surface.orders.clone().unwrap_or_else(|| default_orders(n));
    // Coordinate formulas lose digits near the poles of hyperspherical
    // angles; spread the nodes of angle-parametrized spheres away from them.
    let quad = if bounds == angular_box(n) {
        rotated_sphere_rule(n - 1, &orders)?
    } else {
        product_gauss_legendre(&bounds, &orders)?
    };
    let param_domain = crate::tensor::chart::Domain {
        bounds: bounds.clone(),
        radial: None,
    };
    let induced_metric = Pullback::new(metric, map.clone(), n - 1, param_domain, Layout::Polar)?;
    let center = surface.center(n);
    let nodes = quad
        .nodes
        .par_iter()
        .zip(quad.weights.par_iter())
        .map(|(u, &w)| measure_node(metric, lapse, &map, &induced_metric, surface, &center, u, w))
        .collect::<Result<Vec<_>>>()?;
    let area = nodes.iter().map(|s| s.weight).sum();
    Ok(BoundaryData {
        label: surface.label.clone(),
        n,
        topology: surface.topology.clone(),
        orders,
        nodes,
        area,
    })
}

/// Measures a declared boundary surface of a triple.
pub fn measure_boundary(triple: &StaticTriple, surface: &BoundarySurface) -> Result<BoundaryData> {
    measure_surface(&triple.chart, &triple.lapse, surface)
}
