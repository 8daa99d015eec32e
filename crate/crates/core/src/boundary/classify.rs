//! Horizon / photon-surface classification of measured boundary components.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::measure::BoundaryData;
use crate::error::{GeoError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ClassifyTolerances {
    /// Relative spread below which a nodal field counts as constant.
    pub constancy: f64,
    /// Absolute threshold for `H = 0` and `N = 0` on horizons.
    pub zero: f64,
    /// Smallest admissible surface gravity.
    pub nondegenerate: f64,
    /// Umbilicity deviation relative to `|H|` (absolute when `H = 0`).
    pub umbilic: f64,
    /// Slack allowed in the nodewise scalar-curvature inequality, relative
    /// to its right-hand side.
    pub inequality: f64,
}

impl Default for ClassifyTolerances {
    fn default() -> Self {
        Self {
            constancy: 1e-7,
            zero: 1e-9,
            nondegenerate: 1e-10,
            umbilic: 1e-7,
            inequality: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "variant", rename_all = "kebab-case")]
pub enum BoundaryClassification {
    NondegenerateStaticHorizon {
        kappa: f64,
    },
    #[serde(rename = "generalized-qps")]
    GeneralizedQps {
        c: f64,
        n0: f64,
        h: f64,
        eq3_equality: bool,
        /// Largest constant for which the scalar-curvature inequality holds
        /// at every node.
        c_max: f64,
    },
    Unclassified {
        violations: Vec<String>,
    },
}

impl BoundaryClassification {
    pub fn is_horizon(&self) -> bool {
        matches!(self, Self::NondegenerateStaticHorizon { .. })
    }

    pub fn is_qps(&self) -> bool {
        matches!(self, Self::GeneralizedQps { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::NondegenerateStaticHorizon { .. } => "nondegenerate-static-horizon",
            Self::GeneralizedQps { .. } => "generalized-qps",
            Self::Unclassified { .. } => "unclassified",
        }
    }
}

/// `c` from the photon-surface lapse condition
/// `2ν(N) = ((n−2)/(n−1))(c−1)HN`.
pub fn photon_constant(n: usize, h: f64, lapse: f64, normal_derivative: f64) -> f64 {
    let n = n as f64;
    1.0 + 2.0 * (n - 1.0) * normal_derivative / ((n - 2.0) * h * lapse)
}

fn horizon_violations(data: &BoundaryData, tol: &ClassifyTolerances) -> Vec<String> {
    let mut v = Vec::new();
    let h = data.mean_curvature();
    let lapse = data.lapse();
    let dn = data.normal_derivative();
    if h.max_abs() > tol.zero {
        v.push(format!("mean curvature not zero (max |H| = {:e})", h.max_abs()));
    }
    if data.max_second_fundamental_form() > tol.zero.max(tol.umbilic) {
        v.push(format!(
            "not totally geodesic (max |II| = {:e})",
            data.max_second_fundamental_form()
        ));
    }
    if lapse.max_abs() > tol.zero {
        v.push(format!("lapse not zero (max |N| = {:e})", lapse.max_abs()));
    }
    if !(dn.min >= tol.nondegenerate) {
        v.push(format!("degenerate: min ν(N) = {:e}", dn.min));
    }
    if dn.relative_spread() > tol.constancy {
        v.push(format!(
            "surface gravity not constant (relative spread {:e})",
            dn.relative_spread()
        ));
    }
    v
}

fn qps_check(data: &BoundaryData, tol: &ClassifyTolerances) -> std::result::Result<BoundaryClassification, Vec<String>> {
    let n = data.n;
    let mut v = Vec::new();
    let h = data.mean_curvature();
    let lapse = data.lapse();
    let dn = data.normal_derivative();
    if !(h.min > 0.0) {
        v.push(format!("mean curvature not positive (min H = {:e})", h.min));
    }
    if h.relative_spread() > tol.constancy {
        v.push(format!(
            "mean curvature not constant (relative spread {:e})",
            h.relative_spread()
        ));
    }
    if !(lapse.min > 0.0) {
        v.push(format!("lapse not positive (min N = {:e})", lapse.min));
    }
    if lapse.relative_spread() > tol.constancy {
        v.push(format!(
            "lapse not constant on the component (relative spread {:e})",
            lapse.relative_spread()
        ));
    }
    let umb_scale = h.max_abs().max(1.0) * tol.umbilic;
    if data.max_umbilicity() > umb_scale {
        v.push(format!(
            "not totally umbilic (deviation {:e})",
            data.max_umbilicity()
        ));
    }
    if h.mean.abs() * lapse.mean.abs() <= tol.zero {
        v.push("H·N vanishes; photon-surface constant undefined".into());
        return Err(v);
    }
    let c = photon_constant(n, h.mean, lapse.mean, dn.mean);
    if !(c > 1.0 + tol.nondegenerate) {
        v.push(format!("photon-surface constant c = {c} is not > 1"));
    }
    let nf = n as f64;
    let k = (nf - 2.0) / (nf - 1.0);
    // Lapse condition at every node with the extracted c.
    let worst_eq4 = data.nodes.iter().fold(0.0_f64, |a, s| {
        let lhs = 2.0 * s.normal_derivative;
        let rhs = k * (c - 1.0) * s.mean_curvature * s.lapse;
        a.max((lhs - rhs).abs() / rhs.abs().max(f64::MIN_POSITIVE))
    });
    if worst_eq4 > tol.constancy {
        v.push(format!("normal-derivative condition fails (relative residual {worst_eq4:e})"));
    }
    let mut eq3 = true;
    let mut worst_ineq = 0.0_f64;
    let mut c_max = f64::INFINITY;
    for s in &data.nodes {
        let rhs = k * c * s.mean_curvature * s.mean_curvature;
        let gap = s.scalar - rhs;
        let scale = rhs.abs().max(f64::MIN_POSITIVE);
        if gap < -tol.inequality * scale {
            worst_ineq = worst_ineq.max(-gap / scale);
        }
        if gap.abs() > tol.inequality * scale.max(1.0) {
            eq3 = false;
        }
        c_max = c_max.min(s.scalar / (k * s.mean_curvature * s.mean_curvature));
    }
    if worst_ineq > 0.0 {
        v.push(format!(
            "scalar-curvature inequality fails (relative deficit {worst_ineq:e})"
        ));
    }
    if v.is_empty() {
        Ok(BoundaryClassification::GeneralizedQps {
            c,
            n0: lapse.mean,
            h: h.mean,
            eq3_equality: eq3,
            c_max,
        })
    } else {
        Err(v)
    }
}

/// Classifies measured boundary data as a nondegenerate static horizon, a
/// generalized quasilocal photon surface, or neither.
pub fn classify(data: &BoundaryData, tol: &ClassifyTolerances) -> BoundaryClassification {
    let horizon = horizon_violations(data, tol);
    if horizon.is_empty() {
        return BoundaryClassification::NondegenerateStaticHorizon {
            kappa: data.normal_derivative().mean,
        };
    }
    match qps_check(data, tol) {
        Ok(c) => c,
        Err(qps) => {
            let mut violations: Vec<String> =
                horizon.into_iter().map(|s| format!("horizon: {s}")).collect();
            violations.extend(qps.into_iter().map(|s| format!("photon surface: {s}")));
            BoundaryClassification::Unclassified { violations }
        }
    }
}

/// Euler characteristic `(1/4π) ∫ S̄ dA` of a closed surface in a 3-manifold.
pub fn gauss_bonnet_euler(data: &BoundaryData) -> Result<f64> {
    if data.n != 3 {
        return Err(GeoError::Precondition(format!(
            "Gauss–Bonnet is only evaluated for surfaces in 3-manifolds, got n = {}",
            data.n
        )));
    }
    Ok(data.integrate(|s| s.scalar) / (4.0 * PI))
}
