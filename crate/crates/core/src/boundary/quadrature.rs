//! Tensor-product Gauss–Legendre rules on parameter boxes.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;

use super::surface::angular_box;
use crate::error::{GeoError, Result};

#[derive(Debug, Clone)]
pub struct ParamQuadrature {
    pub nodes: Vec<Vec<f64>>,
    /// Parameter-space weights; multiply by `√det ḡ` for surface measure.
    pub weights: Vec<f64>,
    pub orders: Vec<usize>,
}

impl ParamQuadrature {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Default angular orders for a closed hypersurface of an `n`-manifold,
/// polar angles first and azimuth last.
pub fn default_orders(n: usize) -> Vec<usize> {
    match n {
        3 => vec![24, 32],
        4 => vec![14, 14, 18],
        _ => {
            let mut o = vec![10; n - 2];
            o.push(12);
            o
        }
    }
}

pub fn product_gauss_legendre(bounds: &[(f64, f64)], orders: &[usize]) -> Result<ParamQuadrature> {
    if bounds.len() != orders.len() {
        return Err(GeoError::DimensionMismatch {
            expected: bounds.len(),
            got: orders.len(),
        });
    }
    let mut nodes = vec![Vec::new()];
    let mut weights = vec![1.0];
    for (&(a, b), &order) in bounds.iter().zip(orders) {
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(GeoError::InvalidParameter(format!(
                "quadrature interval ({a}, {b}) must be finite and non-empty"
            )));
        }
        let degree = NonZeroUsize::new(order)
            .ok_or_else(|| GeoError::InvalidParameter("quadrature order must be positive".into()))?;
        let rule = GaussLegendre::new(degree);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        let axis: Vec<(f64, f64)> = rule
            .as_node_weight_pairs()
            .iter()
            .map(|&(x, wx)| (mid + half * x, wx * half))
            .collect();
        let mut next_nodes = Vec::with_capacity(nodes.len() * order);
        let mut next_weights = Vec::with_capacity(nodes.len() * order);
        for (node, &w) in nodes.iter().zip(&weights) {
            for &(x, wx) in &axis {
                let mut p = node.clone();
                p.push(x);
                next_nodes.push(p);
                next_weights.push(w * wx);
            }
        }
        nodes = next_nodes;
        weights = next_weights;
    }
    Ok(ParamQuadrature {
        nodes,
        weights,
        orders: orders.to_vec(),
    })
}

/// Fixed rotation of `R^m`: Givens turns in every coordinate plane by
/// unrelated angles.
fn generic_rotation(m: usize) -> Vec<Vec<f64>> {
    let mut q: Vec<Vec<f64>> = (0..m).map(|i| (0..m).map(|j| f64::from(u8::from(i == j))).collect()).collect();
    for i in 0..m {
        for j in (i + 1)..m {
            let a = 0.61 + 0.37 * (i as f64) + 0.23 * (j as f64);
            let (s, c) = a.sin_cos();
            for row in q.iter_mut() {
                let (x, y) = (row[i], row[j]);
                row[i] = c * x - s * y;
                row[j] = s * x + c * y;
            }
        }
    }
    q
}

/// `∏ sin^{d−k} θ_k`, the round-sphere density in hyperspherical angles.
fn round_density(u: &[f64]) -> f64 {
    let d = u.len();
    u.iter()
        .take(d - 1)
        .enumerate()
        .map(|(k, t)| t.sin().powi((d - 1 - k) as i32))
        .product()
}

fn unit_sphere_point(u: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(u.len() + 1);
    let mut prefix = 1.0;
    for &t in u {
        out.push(prefix * t.cos());
        prefix *= t.sin();
    }
    out.push(prefix);
    out
}

fn sphere_angles(y: &[f64]) -> Vec<f64> {
    let m = y.len();
    let mut u = Vec::with_capacity(m - 1);
    for a in 0..m - 2 {
        let tail = y[a + 1..].iter().map(|v| v * v).sum::<f64>().sqrt();
        u.push(tail.atan2(y[a]));
    }
    u.push(y[m - 1].atan2(y[m - 2]).rem_euclid(2.0 * PI));
    u
}

/// Rule on the angle box `(0, π)^{d−1} × (0, 2π)` of the unit `d`-sphere
/// whose nodes are a product rule turned by a fixed rotation, so that they
/// stay clear of the coordinate poles. Weights are per unit parameter
/// volume, like [`product_gauss_legendre`]: multiply by `√det ḡ`.
pub fn rotated_sphere_rule(d: usize, orders: &[usize]) -> Result<ParamQuadrature> {
    if d < 1 {
        return Err(GeoError::InvalidParameter("sphere dimension must be positive".into()));
    }
    let base = product_gauss_legendre(&angular_box(d + 1), orders)?;
    let rot = generic_rotation(d + 1);
    let mut nodes = Vec::with_capacity(base.len());
    let mut weights = Vec::with_capacity(base.len());
    for (u, &w) in base.nodes.iter().zip(&base.weights) {
        let x = unit_sphere_point(u);
        let y: Vec<f64> = rot.iter().map(|row| row.iter().zip(&x).map(|(a, b)| a * b).sum()).collect();
        let v = sphere_angles(&y);
        let density = round_density(&v);
        if !(density > 0.0) {
            return Err(GeoError::InvalidParameter("rotated node landed on a pole".into()));
        }
        weights.push(w * round_density(u) / density);
        nodes.push(v);
    }
    Ok(ParamQuadrature {
        nodes,
        weights,
        orders: orders.to_vec(),
    })
}
