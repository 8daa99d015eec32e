//! Three-dimensional uniqueness chains that avoid the positive mass
//! theorem: Gauss–Bonnet against the maximum of `W` on a horizon, and the
//! two-sided mass bounds on a photon surface.

use std::f64::consts::PI;

use serde::Serialize;

use crate::boundary::{classify, gauss_bonnet_euler, measure_boundary, BoundaryClassification, ClassifyTolerances};
use crate::error::{GeoError, Result};
use crate::identities::{horizon_scalar_bound, horizon_w_limit, photon_lapse_bound, w_field, MarginField};
use crate::mass::{flux_from_data, omega, photon_mass};
use crate::sampling::halton_shell_points;
use crate::triple::StaticTriple;

/// Absolute tolerance for the chain inequalities, relative to their scale.
pub const CHAIN_TOL: f64 = 1e-8;

fn at_least(margin: f64, scale: f64) -> bool {
    margin >= -CHAIN_TOL * scale.max(1.0)
}

fn equal(margin: f64, scale: f64) -> bool {
    margin.abs() <= CHAIN_TOL * scale.max(1.0)
}

#[derive(Debug, Clone, Serialize)]
pub struct HorizonChain {
    pub kappa: f64,
    pub area: f64,
    pub euler: f64,
    pub mass: f64,
    /// `πχ − 2κ²A`.
    pub gauss_bonnet_margin: f64,
    /// `Aχ/32π − m²`.
    pub upper_mass_margin: f64,
    /// `κ² − 1/(16m²)`.
    pub w_maximum_margin: f64,
    /// `m² − A/16π`.
    pub penrose_margin: f64,
    pub holds: bool,
    pub rigidity: bool,
    pub violations: Vec<String>,
    /// Nodewise `S̄ − 8κ²` when measured on a triple.
    pub scalar_margins: Option<MarginField>,
    /// Relative spread of `W` over interior samples.
    pub w_interior_spread: Option<f64>,
    pub w_horizon_limit: Option<f64>,
}

/// The horizon chain on raw data `(κ, A, χ, m)`.
pub fn horizon_chain_from(kappa: f64, area: f64, euler: f64, mass: f64) -> HorizonChain {
    let gb = PI * euler - 2.0 * kappa * kappa * area;
    let upper = area * euler / (32.0 * PI) - mass * mass;
    let w = kappa * kappa - 1.0 / (16.0 * mass * mass);
    let penrose = mass * mass - area / (16.0 * PI);
    let mut violations = Vec::new();
    if !at_least(gb, PI * euler.abs()) {
        violations.push(format!("πχ ≥ 2κ²A fails (margin {gb:e}); data not static-vacuum-realizable"));
    }
    if !at_least(w, kappa * kappa) {
        violations.push(format!("κ² ≥ 1/(16m²) fails (margin {w:e})"));
    }
    if !at_least(penrose, mass * mass) {
        violations.push(format!("m² ≥ A/16π fails (margin {penrose:e})"));
    }
    let holds = violations.is_empty();
    let rigidity = holds && equal(gb, PI * euler.abs()) && equal(penrose, mass * mass) && (euler - 2.0).abs() <= CHAIN_TOL;
    HorizonChain {
        kappa,
        area,
        euler,
        mass,
        gauss_bonnet_margin: gb,
        upper_mass_margin: upper,
        w_maximum_margin: w,
        penrose_margin: penrose,
        holds,
        rigidity,
        violations,
        scalar_margins: None,
        w_interior_spread: None,
        w_horizon_limit: None,
    }
}

fn single_component<'a>(triple: &'a StaticTriple, chain: &str) -> Result<&'a crate::boundary::BoundarySurface> {
    if triple.dim() != 3 {
        return Err(GeoError::Precondition(format!("{chain} chain is stated for n = 3, got n = {}", triple.dim())));
    }
    match triple.boundaries.as_slice() {
        [only] => Ok(only),
        other => Err(GeoError::Precondition(format!(
            "{chain} chain needs a connected boundary, got {} components",
            other.len()
        ))),
    }
}

fn w_spread(triple: &StaticTriple, count: usize) -> Result<f64> {
    let pts = halton_shell_points(count, 3, triple.chart.layout, triple.sample_shell);
    let ws = pts
        .iter()
        .filter(|x| triple.chart.domain.contains(x))
        .map(|x| w_field(triple, x))
        .collect::<Result<Vec<_>>>()?;
    let max = ws.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = ws.iter().copied().fold(f64::INFINITY, f64::min);
    let mean = ws.iter().sum::<f64>() / ws.len() as f64;
    Ok((max - min) / mean.abs().max(f64::MIN_POSITIVE))
}

pub fn run_appendix_b_horizon(triple: &StaticTriple, tol: &ClassifyTolerances) -> Result<HorizonChain> {
    let surface = single_component(triple, "horizon")?;
    let data = measure_boundary(triple, surface)?;
    let class = classify(&data, tol);
    let BoundaryClassification::NondegenerateStaticHorizon { kappa } = class else {
        return Err(GeoError::Precondition(format!(
            "'{}' is not a nondegenerate static horizon ({})",
            data.label,
            class.name()
        )));
    };
    let euler = gauss_bonnet_euler(&data)?;
    let mass = flux_from_data(&data);
    let mut chain = horizon_chain_from(kappa, data.area, euler, mass);
    chain.scalar_margins = Some(horizon_scalar_bound(&data, &class)?);
    chain.w_horizon_limit = Some(horizon_w_limit(&data));
    chain.w_interior_spread = Some(w_spread(triple, 20)?);
    Ok(chain)
}

#[derive(Debug, Clone, Serialize)]
pub struct PhotonChain {
    pub c: f64,
    pub area: f64,
    pub euler: f64,
    pub mass: f64,
    /// `(1/8)(1 − 1/c)²(A/ω₂)χ`.
    pub upper_bound: f64,
    /// `(1/4)(1 − 1/c)²(A/ω₂)`.
    pub lower_bound: f64,
    /// `½(1 − 1/c)(A/ω₂)^{1/2}`.
    pub mass_from_formula: f64,
    pub holds: bool,
    pub rigidity: bool,
    pub violations: Vec<String>,
    /// `c⁻¹ − N0²` when measured on a triple.
    pub lapse_margin: Option<MarginField>,
    pub w_interior_spread: Option<f64>,
}

pub fn photon_chain_from(c: f64, area: f64, euler: f64, mass: f64) -> PhotonChain {
    let q = (1.0 - 1.0 / c).powi(2) * area / omega(2);
    let upper = q * euler / 8.0;
    let lower = q / 4.0;
    let m2 = mass * mass;
    let mut violations = Vec::new();
    if !at_least(upper - m2, m2) {
        violations.push(format!("m² ≤ (1/8)(1−1/c)²(A/ω₂)χ fails ({m2:e} > {upper:e})"));
    }
    if !at_least(m2 - lower, m2) {
        violations.push(format!("m² ≥ (1/4)(1−1/c)²(A/ω₂) fails ({m2:e} < {lower:e})"));
    }
    let holds = violations.is_empty();
    let rigidity = holds && equal(upper - m2, m2) && equal(m2 - lower, m2);
    PhotonChain {
        c,
        area,
        euler,
        mass,
        upper_bound: upper,
        lower_bound: lower,
        mass_from_formula: photon_mass(area, c, 3),
        holds,
        rigidity,
        violations,
        lapse_margin: None,
        w_interior_spread: None,
    }
}

pub fn run_appendix_b_photon(triple: &StaticTriple, tol: &ClassifyTolerances) -> Result<PhotonChain> {
    let surface = single_component(triple, "photon")?;
    let data = measure_boundary(triple, surface)?;
    let class = classify(&data, tol);
    let BoundaryClassification::GeneralizedQps { c, .. } = class else {
        return Err(GeoError::Precondition(format!(
            "'{}' is not a generalized photon surface ({})",
            data.label,
            class.name()
        )));
    };
    let euler = gauss_bonnet_euler(&data)?;
    let mass = flux_from_data(&data);
    let mut chain = photon_chain_from(c, data.area, euler, mass);
    chain.lapse_margin = Some(photon_lapse_bound(&data, &class)?);
    chain.w_interior_spread = Some(w_spread(triple, 20)?);
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schwarzschild::{Cut, SchwarzschildModel};

    #[test]
    fn synthetic_horizon_chains() {
        let strict = horizon_chain_from(0.25, 12.0 * PI, 2.0, 1.0);
        assert!(strict.holds && !strict.rigidity);
        assert!((strict.gauss_bonnet_margin - 0.5 * PI).abs() < 1e-14);
        let bad = horizon_chain_from(0.5, 16.0 * PI, 2.0, 1.0);
        assert!((bad.w_maximum_margin - 3.0 / 16.0).abs() < 1e-15);
        assert!(!bad.holds && bad.violations[0].contains("not static-vacuum-realizable"));
    }

    #[test]
    fn synthetic_photon_chains() {
        let bad = photon_chain_from(2.0, 16.0 * PI, 2.0, 0.4);
        assert!((bad.lower_bound - 0.25).abs() < 1e-15 && !bad.holds);
        let eq = photon_chain_from(5.0, 100.0 * PI, 2.0, 2.0);
        assert!((eq.lower_bound - 4.0).abs() < 1e-13 && (eq.upper_bound - 4.0).abs() < 1e-13);
        assert!(eq.rigidity);
    }

    #[test]
    fn schwarzschild_chains_are_rigid() {
        let s = SchwarzschildModel::new(3, 1.0).unwrap();
        let t = s.isotropic_triple(Some(Cut::Horizon)).unwrap();
        let h = run_appendix_b_horizon(&t, &ClassifyTolerances::default()).unwrap();
        assert!(h.rigidity, "{h:?}");
        assert!((h.euler - 2.0).abs() < 1e-8);
        let t = s.areal_triple(Some(Cut::Areal(3.0))).unwrap();
        let p = run_appendix_b_photon(&t, &ClassifyTolerances::default()).unwrap();
        assert!(p.rigidity && (p.c - 3.0).abs() < 1e-9, "{p:?}");
    }
}
