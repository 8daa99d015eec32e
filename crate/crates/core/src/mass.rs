//! ADM mass, lapse-flux mass, and closed-form boundary masses.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;
use statrs::function::gamma::gamma;

use crate::boundary::quadrature::{default_orders, product_gauss_legendre};
use crate::boundary::surface::angular_box;
use crate::boundary::{measure_boundary, BoundaryData, BoundarySurface};
use crate::error::{GeoError, Result};
use crate::expr::Expr;
use crate::linalg::Mat;
use crate::sampling::halton_shell_points;
use crate::tensor::chart::{cartesian_to_polar_map, unit_sphere_map, Chart, Domain, Layout, Metric, Pullback};
use crate::tensor::curvature::metric_jet;
use crate::tensor::operators::laplacian;
use crate::triple::StaticTriple;

/// Volume of the unit round sphere `S^d`.
pub fn omega(d: usize) -> f64 {
    let k = (d as f64 + 1.0) / 2.0;
    2.0 * PI.powf(k) / gamma(k)
}

/// Cartesian view of a chart: the chart itself, or its pullback along the
/// Cartesian-to-polar map.
pub enum CartesianView<'a> {
    Native(&'a Chart),
    Converted(Pullback<&'a Chart>),
}

impl Metric for CartesianView<'_> {
    fn dim(&self) -> usize {
        match self {
            Self::Native(c) => c.dim(),
            Self::Converted(p) => p.dim(),
        }
    }
    fn components<S: crate::autodiff::Scalar>(&self, x: &[S]) -> Mat<S> {
        match self {
            Self::Native(c) => c.components(x),
            Self::Converted(p) => p.components(x),
        }
    }
    fn domain(&self) -> &Domain {
        match self {
            Self::Native(c) => c.domain(),
            Self::Converted(p) => p.domain(),
        }
    }
}

pub fn cartesian_view(chart: &Chart) -> Result<CartesianView<'_>> {
    match chart.layout {
        Layout::Cartesian => Ok(CartesianView::Native(chart)),
        Layout::Polar => {
            let n = chart.dim();
            let r_min = chart.domain.bounds[0].0.max(0.0);
            let domain = Domain::unbounded(n).with_radial(r_min, f64::INFINITY);
            Ok(CartesianView::Converted(Pullback::new(
                chart,
                cartesian_to_polar_map(n),
                n,
                domain,
                Layout::Cartesian,
            )?))
        }
    }
}

/// Cartesian view of a polar scalar field.
pub fn cartesian_field(field: &Expr, layout: Layout, n: usize) -> Expr {
    match layout {
        Layout::Cartesian => field.clone(),
        Layout::Polar => field.substitute(&cartesian_to_polar_map(n)),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AdmReport {
    /// Extrapolated value.
    pub value: f64,
    pub radii: Vec<f64>,
    /// Flux integrals at each radius.
    pub raw: Vec<f64>,
    pub orders: Vec<usize>,
    /// `max |g − δ|` on each extraction sphere.
    pub deviation: Vec<f64>,
}

/// Decay threshold for `max |g − δ|` on the outermost extraction sphere.
const DECAY_LIMIT: f64 = 0.1;

/// ADM flux `(1/(2(n−1)ω)) ∫_{S_R} (∂_j g_ij − ∂_i g_jj) ν^i dA` at one radius.
pub fn adm_flux<M: Metric>(metric: &M, radius: f64, orders: &[usize]) -> Result<(f64, f64)> {
    let n = metric.dim();
    let quad = product_gauss_legendre(&angular_box(n), orders)?;
    let sphere = unit_sphere_map(n - 1, 0);
    let area_factor = radius.powi(n as i32 - 1);
    let parts = quad
        .nodes
        .par_iter()
        .zip(quad.weights.par_iter())
        .map(|(u, &w)| -> Result<(f64, f64)> {
            let dir: Vec<f64> = sphere.iter().map(|e| e.eval(u)).collect();
            // Round-sphere area element in hyperspherical angles.
            let mut jac = 1.0;
            for (a, &ua) in u.iter().take(n - 2).enumerate() {
                jac *= ua.sin().powi((n - 2 - a) as i32);
            }
            let x: Vec<f64> = dir.iter().map(|d| d * radius).collect();
            let jet = metric_jet(metric, x.as_slice())?;
            let mut integrand = 0.0;
            for i in 0..n {
                let mut div = 0.0;
                for j in 0..n {
                    div += jet.dg[j][(i, j)] - jet.dg[i][(j, j)];
                }
                integrand += div * dir[i];
            }
            let mut dev: f64 = 0.0;
            for i in 0..n {
                for j in 0..n {
                    let delta = if i == j { 1.0 } else { 0.0 };
                    dev = dev.max((jet.g[(i, j)] - delta).abs());
                }
            }
            Ok((integrand * w * jac * area_factor, dev))
        })
        .collect::<Result<Vec<_>>>()?;
    let total: f64 = parts.iter().map(|p| p.0).sum();
    let dev = parts.iter().fold(0.0_f64, |a, p| a.max(p.1));
    Ok((total / (2.0 * (n as f64 - 1.0) * omega(n - 1)), dev))
}

/// ADM mass from flux integrals on `R, 2R, 4R`, extrapolated quadratically
/// in `h = R^{−(n−2)}`.
pub fn adm_mass<M: Metric>(metric: &M, r_extract: f64) -> Result<AdmReport> {
    let n = metric.dim();
    if metric.layout() != Layout::Cartesian {
        return Err(GeoError::Precondition(
            "ADM integrand needs Cartesian-like coordinates; convert the chart first".into(),
        ));
    }
    if !(r_extract > 0.0 && r_extract.is_finite()) {
        return Err(GeoError::InvalidParameter(format!("extraction radius {r_extract}")));
    }
    let orders = default_orders(n);
    let radii = vec![r_extract, 2.0 * r_extract, 4.0 * r_extract];
    let mut raw = Vec::with_capacity(3);
    let mut deviation = Vec::with_capacity(3);
    for &r in &radii {
        let (m, dev) = adm_flux(metric, r, &orders)?;
        raw.push(m);
        deviation.push(dev);
    }
    if !(deviation[2] <= DECAY_LIMIT) || deviation[2] > deviation[0] * (1.0 + 1e-9) + 1e-14 {
        return Err(GeoError::NonDecaying(format!(
            "max |g − δ| = {:e}, {:e}, {:e} at R = {:?}",
            deviation[0], deviation[1], deviation[2], radii
        )));
    }
    let p = n as f64 - 2.0;
    let h: Vec<f64> = radii.iter().map(|r| r.powf(-p)).collect();
    // Lagrange interpolation through (h_k, raw_k) evaluated at h = 0.
    let mut value = 0.0;
    for k in 0..3 {
        let mut basis = 1.0;
        for j in 0..3 {
            if j != k {
                basis *= h[j] / (h[j] - h[k]);
            }
        }
        value += basis * raw[k];
    }
    Ok(AdmReport {
        value,
        radii,
        raw,
        orders,
        deviation,
    })
}

/// Harmonicity probe threshold for the flux mass.
pub const FLUX_HARMONIC_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
pub struct FluxReport {
    pub value: f64,
    pub surface: String,
    pub area: f64,
    /// Largest `|ΔN|` at interior probe points.
    pub harmonic_residual: f64,
    pub warning: Option<String>,
}

/// `(1/((n−2)ω)) ∫ ν(N) dA` from measured boundary data.
pub fn flux_from_data(data: &BoundaryData) -> f64 {
    let n = data.n as f64;
    data.integrate(|s| s.normal_derivative) / ((n - 2.0) * omega(data.n - 1))
}

/// Largest `|ΔN|` over low-discrepancy interior points of the triple.
pub fn harmonic_residual(triple: &StaticTriple, count: usize) -> Result<f64> {
    let pts = halton_shell_points(count, triple.dim(), triple.chart.layout, triple.sample_shell);
    let vals = pts
        .par_iter()
        .filter(|x| triple.chart.domain.contains(x))
        .map(|x| laplacian(&triple.chart, &triple.lapse, x).map(f64::abs))
        .collect::<Result<Vec<_>>>()?;
    Ok(vals.into_iter().fold(0.0, f64::max))
}

pub fn flux_mass(triple: &StaticTriple, surface: &BoundarySurface) -> Result<FluxReport> {
    let data = measure_boundary(triple, surface)?;
    let residual = harmonic_residual(triple, 32)?;
    Ok(FluxReport {
        value: flux_from_data(&data),
        surface: surface.label.clone(),
        area: data.area,
        harmonic_residual: residual,
        warning: (residual > FLUX_HARMONIC_TOL).then(|| {
            format!("lapse is not harmonic (|ΔN| up to {residual:e}); flux depends on the surface")
        }),
    })
}

/// `½ (A/ω_{n−1})^{(n−2)/(n−1)}`.
pub fn horizon_mass(area: f64, n: usize) -> f64 {
    let nf = n as f64;
    0.5 * (area / omega(n - 1)).powf((nf - 2.0) / (nf - 1.0))
}

/// `½ (1 − 1/c) (A/ω_{n−1})^{(n−2)/(n−1)}`.
pub fn photon_mass(area: f64, c: f64, n: usize) -> f64 {
    (1.0 - 1.0 / c) * horizon_mass(area, n)
}

/// Penrose margin `m² − A/16π` in dimension three.
pub fn penrose_check(m: f64, area: f64) -> f64 {
    m * m - area / (16.0 * PI)
}

#[derive(Debug, Clone, Serialize)]
pub struct MassReport {
    pub adm: Option<AdmReport>,
    pub flux: Vec<FluxReport>,
    pub closed_form: Option<f64>,
    pub closed_form_kind: Option<String>,
    pub sphere_radius_used: f64,
    pub quadrature_orders: Vec<usize>,
    pub discrepancy_adm_flux: Option<f64>,
    pub discrepancy_flux_closed: Option<f64>,
    pub notes: Vec<String>,
}

/// Extraction radius for a triple: fifty times its length scale.
pub fn default_extraction_radius(triple: &StaticTriple) -> f64 {
    50.0 * triple.sample_shell.0.max(1.0)
}

/// ADM, flux and closed-form masses of a triple.
pub fn mass_report(triple: &StaticTriple, tol: &crate::boundary::ClassifyTolerances) -> Result<MassReport> {
    let n = triple.dim();
    let r_extract = default_extraction_radius(triple);
    let view = cartesian_view(&triple.chart)?;
    let mut notes = Vec::new();
    let adm = match adm_mass(&view, r_extract) {
        Ok(a) => Some(a),
        Err(e) => {
            notes.push(format!("ADM mass unavailable: {e}"));
            None
        }
    };
    let surfaces: Vec<BoundarySurface> = if triple.boundaries.is_empty() {
        let rho = (triple.sample_shell.0 * triple.sample_shell.1).sqrt();
        notes.push(format!("no declared boundary; flux measured on coordinate sphere {rho}"));
        vec![match triple.chart.layout {
            Layout::Cartesian => BoundarySurface::sphere(format!("sphere-{rho}"), n, rho),
            Layout::Polar => BoundarySurface::radial_level(format!("r={rho}"), rho),
        }]
    } else {
        triple.boundaries.clone()
    };
    let residual = harmonic_residual(triple, 32)?;
    let mut flux = Vec::new();
    let mut closed_form = None;
    let mut closed_form_kind = None;
    for s in &surfaces {
        let data = measure_boundary(triple, s)?;
        flux.push(FluxReport {
            value: flux_from_data(&data),
            surface: s.label.clone(),
            area: data.area,
            harmonic_residual: residual,
            warning: (residual > FLUX_HARMONIC_TOL)
                .then(|| format!("lapse is not harmonic (|ΔN| up to {residual:e})")),
        });
        if closed_form.is_none() && !triple.boundaries.is_empty() {
            match crate::boundary::classify(&data, tol) {
                crate::boundary::BoundaryClassification::NondegenerateStaticHorizon { .. } => {
                    closed_form = Some(horizon_mass(data.area, n));
                    closed_form_kind = Some("horizon".to_string());
                }
                crate::boundary::BoundaryClassification::GeneralizedQps { c, .. } => {
                    closed_form = Some(photon_mass(data.area, c, n));
                    closed_form_kind = Some("photon-surface".to_string());
                }
                crate::boundary::BoundaryClassification::Unclassified { .. } => {}
            }
        }
    }
    let flux0 = flux.first().map(|f| f.value);
    Ok(MassReport {
        discrepancy_adm_flux: adm.as_ref().zip(flux0).map(|(a, f)| (a.value - f).abs()),
        discrepancy_flux_closed: closed_form.zip(flux0).map(|(c, f)| (c - f).abs()),
        adm,
        flux,
        closed_form,
        closed_form_kind,
        sphere_radius_used: r_extract,
        quadrature_orders: default_orders(n),
        notes,
    })
}
