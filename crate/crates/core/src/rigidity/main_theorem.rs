//! Hypothesis-by-hypothesis rigidity check for a triple with declared inner
//! boundary, ending in a Schwarzschild identification when every step holds.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fit::{schwarzschild_fit, SchwarzschildFit};
use super::laplace::{solve_exterior_laplace, LaplaceGrid, RadialProfile};
use crate::boundary::{classify, measure_boundary, BoundaryClassification, BoundaryData, ClassifyTolerances};
use crate::conformal::{
    build_g_plus, factor_normal_derivative, factor_value, homothetic_eigenvalue_rescale,
    mean_curvature_transform, Sign,
};
use crate::error::Result;
use crate::mass::{adm_mass, cartesian_view, default_extraction_radius, flux_from_data, horizon_mass, omega, photon_mass, AdmReport};
use crate::sampling::halton_shell_points;
use crate::spectral::{
    friedcomp_check, friedrich_bound, positive_constants_margin, pmt_hypothesis, Branch, EigenBound,
    EigenBoundKind, FriedComp, PmtCheck,
};
use crate::tensor::curvature::{curvature_at, geometry};
use crate::tensor::operators::laplacian;
use crate::triple::StaticTriple;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RigidityOptions {
    pub classify: ClassifyTolerances,
    /// Interior points probed for `ΔN = 0` and `R ≥ 0`.
    pub probe_points: usize,
    pub harmonic_tol: f64,
    pub scalar_tol: f64,
    pub adm_tol: f64,
    pub pmt_tol: f64,
    pub flatness_points: usize,
    pub flatness_tol: f64,
    pub fit_points: usize,
    pub fit_tol: f64,
    pub mass_tol: f64,
    pub laplace: LaplaceGrid,
}

impl Default for RigidityOptions {
    fn default() -> Self {
        Self {
            classify: ClassifyTolerances::default(),
            probe_points: 64,
            harmonic_tol: 1e-8,
            scalar_tol: 1e-8,
            adm_tol: 1e-6,
            pmt_tol: 1e-9,
            flatness_points: 200,
            flatness_tol: 1e-6,
            fit_points: 200,
            fit_tol: 1e-7,
            mass_tol: 1e-5,
            laplace: LaplaceGrid::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub hypothesis: String,
    pub details: String,
}

impl Violation {
    fn new(hypothesis: &str, details: impl Into<String>) -> Self {
        Self {
            hypothesis: hypothesis.to_string(),
            details: details.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Conclusion {
    CertifiedSchwarzschild,
    HypothesesHoldNoEqualityDetected,
    HypothesisViolated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComponentBranch {
    Horizon,
    /// `N ≥ c^{−1/2}`.
    QpsLapseAbove,
    /// `N ≤ c^{−1/2}`.
    QpsLapseBelow,
    /// `N = c^{−1/2}`, checked through both routes.
    QpsTie,
    None,
}

/// One eigenvalue route to `λ₁(D⁺) ≥ H⁺/2`.
#[derive(Debug, Clone, Serialize)]
pub struct RouteCheck {
    pub route: String,
    pub bound: EigenBound,
    pub pmt: PmtCheck,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentReport {
    pub label: String,
    pub classification: BoundaryClassification,
    pub area: f64,
    pub mean_curvature: f64,
    pub lapse: f64,
    pub normal_derivative: f64,
    pub inf_scalar: f64,
    pub h_plus: Option<f64>,
    pub h_plus_closed_form: Option<f64>,
    pub h_minus: Option<f64>,
    pub branch: ComponentBranch,
    pub friedcomp: Option<FriedComp>,
    /// `(cN−1)Φ₊ − (cN+1)Φ₋`.
    pub g_minus_condition: Option<f64>,
    pub positive_constants: Option<f64>,
    pub routes: Vec<RouteCheck>,
    /// Which surrogate stands in for the spinor lemma on `ḡ⁻`.
    pub surrogate: Option<String>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MassCrossCheck {
    pub flux: Option<f64>,
    pub closed_form: Option<f64>,
    pub fitted: Option<f64>,
    pub boundary_value_problem: Option<f64>,
    pub max_pairwise_gap: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RigidityVerdict {
    pub triple: String,
    pub n: usize,
    pub components: Vec<ComponentReport>,
    pub connected: bool,
    pub max_laplacian: f64,
    pub min_scalar: f64,
    pub adm_g_plus: Option<AdmReport>,
    pub flatness_residual: Option<f64>,
    pub flatness_points: usize,
    pub fit: Option<SchwarzschildFit>,
    pub fitted_mass: Option<f64>,
    /// `s_l` (horizon) or `s̃_l` (photon surface).
    pub fitted_radius: Option<f64>,
    /// Areal radius of the boundary in `g⁺`, measured independently.
    pub boundary_radius_g_plus: Option<f64>,
    pub s_hat: Option<f64>,
    pub profile: Option<RadialProfile>,
    pub masses: Option<MassCrossCheck>,
    pub conclusion: Conclusion,
    pub violations: Vec<Violation>,
    pub notes: Vec<String>,
}

impl RigidityVerdict {
    pub fn certified(&self) -> bool {
        self.conclusion == Conclusion::CertifiedSchwarzschild
    }
}

/// Names the hypothesis behind a list of classification violations.
pub fn violated_hypothesis(violations: &[String]) -> &'static str {
    let has = |needle: &str| violations.iter().any(|v| v.starts_with("photon surface") && v.contains(needle));
    if has("lapse not constant") {
        "constant-boundary-lapse"
    } else if has("scalar-curvature inequality") {
        "photon-surface-scalar-inequality"
    } else if has("is not > 1") {
        "photon-surface-constant"
    } else {
        "boundary-classification"
    }
}

/// `s_l = (n−2)/(2^{n/(n−2)} κ)`.
pub fn horizon_radius(n: usize, kappa: f64) -> f64 {
    let nf = n as f64;
    (nf - 2.0) / (2.0_f64.powf(nf / (nf - 2.0)) * kappa)
}

/// `s̃_l = (n−1) 2^{−2/(n−2)} c^{−n/(2(n−2))} (c^{1/2} + 1)^{2/(n−2)} / H`.
pub fn photon_radius(n: usize, c: f64, h: f64) -> f64 {
    let nf = n as f64;
    let k = nf - 2.0;
    (nf - 1.0) * 2.0_f64.powf(-2.0 / k) * c.powf(-nf / (2.0 * k)) * (c.sqrt() + 1.0).powf(2.0 / k) / h
}

/// `ŝ_l = (n−1) 2^{−2/(n−2)} c^{−n/(2(n−2))} (c − 1)^{1/(n−2)} / H`.
pub fn photon_s_hat(n: usize, c: f64, h: f64) -> f64 {
    let nf = n as f64;
    let k = nf - 2.0;
    (nf - 1.0) * 2.0_f64.powf(-2.0 / k) * c.powf(-nf / (2.0 * k)) * (c - 1.0).powf(1.0 / k) / h
}

fn friedrich_route(data: &BoundaryData, phi_plus: f64, h_plus: f64, n: usize) -> RouteCheck {
    let inf_scalar_plus = phi_plus.powf(-4.0 / (n as f64 - 2.0)) * data.scalar().min;
    let bound = friedrich_bound(inf_scalar_plus, n - 1);
    RouteCheck {
        route: "friedrich-g-plus".into(),
        pmt: pmt_hypothesis(&bound, h_plus),
        bound,
    }
}

fn g_minus_route(h_minus: f64, phi_minus: f64, phi_plus: f64, h_plus: f64, n: usize) -> RouteCheck {
    let lambda_plus = homothetic_eigenvalue_rescale(0.5 * h_minus, phi_minus, phi_plus, n);
    let bound = EigenBound {
        value: lambda_plus,
        kind: EigenBoundKind::Rescaled,
        note: format!("λ₁(D⁻) ≥ H⁻/2 = {:e}, rescaled to ḡ⁺", 0.5 * h_minus),
    };
    RouteCheck {
        route: "g-minus-comparison".into(),
        pmt: pmt_hypothesis(&bound, h_plus),
        bound,
    }
}

fn component_report(data: &BoundaryData, opts: &RigidityOptions) -> ComponentReport {
    let n = data.n;
    let nf = n as f64;
    let class = classify(data, &opts.classify);
    let h = data.mean_curvature().mean;
    let n0 = data.lapse().mean;
    let dn = data.normal_derivative().mean;
    let mut report = ComponentReport {
        label: data.label.clone(),
        classification: class.clone(),
        area: data.area,
        mean_curvature: h,
        lapse: n0,
        normal_derivative: dn,
        inf_scalar: data.scalar().min,
        h_plus: None,
        h_plus_closed_form: None,
        h_minus: None,
        branch: ComponentBranch::None,
        friedcomp: None,
        g_minus_condition: None,
        positive_constants: None,
        routes: vec![],
        surrogate: None,
        pass: false,
    };
    let phi_plus = factor_value(n0, Sign::Plus);
    let phi_minus = factor_value(n0, Sign::Minus);
    let transform = |sign| mean_curvature_transform(h, factor_normal_derivative(dn, sign), factor_value(n0, sign), n, sign).ok();
    match class {
        BoundaryClassification::NondegenerateStaticHorizon { kappa } => {
            let hp = transform(Sign::Plus);
            report.h_plus = hp;
            report.h_minus = transform(Sign::Minus);
            report.h_plus_closed_form = Some(2.0_f64.powf(nf / (nf - 2.0)) * (nf - 1.0) / (nf - 2.0) * kappa);
            report.branch = ComponentBranch::Horizon;
            if let Some(hp) = hp {
                // ḡ⁺ = ḡ⁻ on a horizon, so one Friedrich bound serves both metrics.
                report.routes.push(friedrich_route(data, phi_plus, hp, n));
            }
        }
        BoundaryClassification::GeneralizedQps { c, n0, h, .. } => {
            let hp = transform(Sign::Plus);
            let hm = transform(Sign::Minus);
            report.h_plus = hp;
            report.h_minus = hm;
            report.h_plus_closed_form = Some(0.5 * h * phi_plus.powf(-nf / (nf - 2.0)) * (c * n0 + 1.0));
            let fc = friedcomp_check(c, n0);
            report.friedcomp = Some(fc);
            report.g_minus_condition = Some((c * n0 - 1.0) * phi_plus - (c * n0 + 1.0) * phi_minus);
            report.branch = match fc.branch {
                Branch::Friedrich => ComponentBranch::QpsLapseBelow,
                Branch::GMinus => ComponentBranch::QpsLapseAbove,
                Branch::Both => ComponentBranch::QpsTie,
            };
            if let Some(hp) = hp {
                if matches!(fc.branch, Branch::Friedrich | Branch::Both) {
                    report.routes.push(friedrich_route(data, phi_plus, hp, n));
                }
                if matches!(fc.branch, Branch::GMinus | Branch::Both) {
                    report.positive_constants = positive_constants_margin(h, n0, c, phi_minus, n).ok();
                    if let Some(hm) = hm {
                        report.routes.push(g_minus_route(hm, phi_minus, phi_plus, hp, n));
                    }
                }
            }
        }
        BoundaryClassification::Unclassified { .. } => return report,
    }
    let positive_ok = !matches!(report.branch, ComponentBranch::QpsLapseAbove | ComponentBranch::QpsTie)
        || report.positive_constants.is_some_and(|v| v > 0.0);
    report.pass = !report.routes.is_empty()
        && report.routes.iter().all(|r| r.pmt.margin >= -opts.pmt_tol && report.h_plus.is_some_and(|h| h > 0.0))
        && positive_ok;
    report
}

fn probe_interior(triple: &StaticTriple, count: usize) -> Result<(f64, f64)> {
    let pts: Vec<Vec<f64>> = halton_shell_points(count, triple.dim(), triple.chart.layout, triple.sample_shell)
        .into_iter()
        .filter(|x| triple.chart.domain.contains(x))
        .collect();
    let vals = pts
        .par_iter()
        .map(|x| -> Result<(f64, f64)> {
            let lap = laplacian(&triple.chart, &triple.lapse, x)?;
            let r = geometry(&triple.chart, x.as_slice())?.scalar;
            Ok((lap.abs(), r))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(vals
        .into_iter()
        .fold((0.0, f64::INFINITY), |(l, r), (a, b)| (l.max(a), r.min(b))))
}

/// Runs the full hypothesis chain on a triple.
pub fn run_main_theorem_check(triple: &StaticTriple, opts: &RigidityOptions) -> Result<RigidityVerdict> {
    let n = triple.dim();
    let mut verdict = RigidityVerdict {
        triple: triple.label.clone(),
        n,
        components: vec![],
        connected: triple.boundaries.len() == 1,
        max_laplacian: 0.0,
        min_scalar: 0.0,
        adm_g_plus: None,
        flatness_residual: None,
        flatness_points: 0,
        fit: None,
        fitted_mass: None,
        fitted_radius: None,
        boundary_radius_g_plus: None,
        s_hat: None,
        profile: None,
        masses: None,
        conclusion: Conclusion::HypothesisViolated,
        violations: vec![],
        notes: vec![],
    };
    if triple.boundaries.is_empty() {
        verdict.violations.push(Violation::new("declared-boundary", "triple has no declared boundary component"));
        return Ok(verdict);
    }
    let (max_lap, min_r) = probe_interior(triple, opts.probe_points)?;
    verdict.max_laplacian = max_lap;
    verdict.min_scalar = min_r;
    if max_lap > opts.harmonic_tol {
        verdict.violations.push(Violation::new(
            "harmonic-lapse",
            format!("|ΔN| reaches {max_lap:e} > {:e}", opts.harmonic_tol),
        ));
    }
    if min_r < -opts.scalar_tol {
        verdict.violations.push(Violation::new(
            "nonnegative-scalar-curvature",
            format!("R reaches {min_r:e}"),
        ));
    }
    let g_plus = match build_g_plus(triple) {
        Ok(p) => Some(p),
        Err(e) => {
            verdict.violations.push(Violation::new("positive-conformal-factor", e.to_string()));
            None
        }
    };
    if !verdict.violations.is_empty() {
        return Ok(verdict);
    }
    let g_plus = g_plus.expect("checked above");

    // Step (a): g⁺ has vanishing ADM mass.
    let view = cartesian_view(&g_plus.derived)?;
    match adm_mass(&view, default_extraction_radius(triple)) {
        Ok(a) => {
            if a.value.abs() > opts.adm_tol {
                verdict.violations.push(Violation::new(
                    "asymptotic-isotropy",
                    format!("ADM(g⁺) = {:e}, expected 0", a.value),
                ));
            }
            verdict.adm_g_plus = Some(a);
        }
        Err(e) => verdict.violations.push(Violation::new("asymptotic-isotropy", e.to_string())),
    }

    // Steps (b)–(e): classify each component and check the eigenvalue chain.
    let data = triple
        .boundaries
        .iter()
        .map(|s| measure_boundary(triple, s))
        .collect::<Result<Vec<_>>>()?;
    for d in &data {
        let rep = component_report(d, opts);
        if let BoundaryClassification::Unclassified { violations } = &rep.classification {
            verdict.violations.push(Violation::new(
                violated_hypothesis(violations),
                format!("'{}': {}", rep.label, violations.join("; ")),
            ));
        } else if !rep.pass {
            let worst = rep.routes.iter().map(|r| r.pmt.margin).fold(f64::INFINITY, f64::min);
            verdict.violations.push(Violation::new(
                "dirac-mean-curvature",
                format!("'{}': pmt margin {worst:e} on branch {:?}", rep.label, rep.branch),
            ));
        }
        verdict.components.push(rep);
    }
    let h_minus_positive = verdict
        .components
        .iter()
        .all(|c| c.h_minus.is_some_and(|h| h > 0.0));
    for c in &mut verdict.components {
        if c.branch != ComponentBranch::None {
            c.surrogate = Some(if h_minus_positive { "hmz" } else { "positive-constants" }.to_string());
        }
    }
    if !verdict.violations.is_empty() {
        return Ok(verdict);
    }

    // Step (f): flatness of g⁺, then identification with Schwarzschild.
    let pts: Vec<Vec<f64>> = halton_shell_points(opts.flatness_points, n, triple.chart.layout, triple.sample_shell)
        .into_iter()
        .filter(|x| triple.chart.domain.contains(x))
        .collect();
    let flat = pts
        .par_iter()
        .map(|x| curvature_at(&g_plus.derived, x).map(|c| c.max_abs_riemann()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    verdict.flatness_residual = Some(flat);
    verdict.flatness_points = pts.len();
    if !verdict.connected {
        verdict.notes.push(
            "hypotheses hold on each component; connectedness of the boundary is a theorem-level conclusion not re-derived here"
                .into(),
        );
        verdict.conclusion = Conclusion::HypothesesHoldNoEqualityDetected;
        return Ok(verdict);
    }
    if flat > opts.flatness_tol {
        verdict.notes.push(format!("g⁺ not flat to tolerance (max |Riem⁺| = {flat:e})"));
        verdict.conclusion = Conclusion::HypothesesHoldNoEqualityDetected;
        return Ok(verdict);
    }
    let comp = &verdict.components[0];
    let d0 = &data[0];
    let (radius, boundary_value, closed) = match comp.classification {
        BoundaryClassification::NondegenerateStaticHorizon { kappa } => {
            (horizon_radius(n, kappa), 2.0, horizon_mass(d0.area, n))
        }
        BoundaryClassification::GeneralizedQps { c, h, .. } => {
            verdict.s_hat = Some(photon_s_hat(n, c, h));
            (photon_radius(n, c, h), 2.0 / (1.0 + c.powf(-0.5)), photon_mass(d0.area, c, n))
        }
        BoundaryClassification::Unclassified { .. } => unreachable!("violations returned above"),
    };
    verdict.fitted_radius = Some(radius);
    let phi_plus = factor_value(comp.lapse, Sign::Plus);
    let area_plus = phi_plus.powf(2.0 * (n as f64 - 1.0) / (n as f64 - 2.0)) * d0.area;
    verdict.boundary_radius_g_plus = Some((area_plus / omega(n - 1)).powf(1.0 / (n as f64 - 1.0)));
    let profile = solve_exterior_laplace(n, radius, boundary_value, &opts.laplace)?;
    if verdict.s_hat.is_none() {
        verdict.s_hat = Some(profile.s_hat());
    }
    let fit = schwarzschild_fit(triple, &g_plus, opts.fit_points)?;
    let flux = flux_from_data(d0);
    let masses = [Some(flux), Some(closed), Some(fit.mass), Some(profile.mass())];
    let values: Vec<f64> = masses.iter().flatten().copied().collect();
    let mut gap: f64 = 0.0;
    for a in &values {
        for b in &values {
            gap = gap.max((a - b).abs());
        }
    }
    verdict.fitted_mass = Some(fit.mass);
    verdict.masses = Some(MassCrossCheck {
        flux: masses[0],
        closed_form: masses[1],
        fitted: masses[2],
        boundary_value_problem: masses[3],
        max_pairwise_gap: gap,
    });
    let radius_gap = (verdict.boundary_radius_g_plus.unwrap_or(radius) - radius).abs();
    if fit.fit_residual > opts.fit_tol {
        verdict.notes.push(format!("Ψ fit residual {:e} above tolerance", fit.fit_residual));
        verdict.conclusion = Conclusion::HypothesesHoldNoEqualityDetected;
    } else if gap > opts.mass_tol {
        verdict.violations.push(Violation::new(
            "mass-coherence",
            format!("flux, closed-form, fitted and boundary-value masses differ by up to {gap:e}"),
        ));
    } else if radius_gap > opts.mass_tol * radius.max(1.0) {
        verdict.violations.push(Violation::new(
            "mass-coherence",
            format!("boundary radius in g⁺ differs from the predicted {radius} by {radius_gap:e}"),
        ));
    } else {
        verdict.conclusion = Conclusion::CertifiedSchwarzschild;
    }
    verdict.fit = Some(fit);
    verdict.profile = Some(profile);
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::BoundarySurface;
    use crate::expr::Expr;
    use crate::schwarzschild::{Cut, SchwarzschildModel};
    use crate::tensor::chart::Chart;

    #[test]
    fn radii_formulas() {
        assert!((horizon_radius(3, 0.25) - 0.5).abs() < 1e-15);
        let s3 = 3.0_f64.sqrt();
        let h = 2.0 / (3.0 * s3);
        let st = photon_radius(3, 3.0, h);
        let mut m = SchwarzschildModel::new(3, 1.0).unwrap();
        assert!((st - m.isotropic_from_areal(3.0).unwrap()).abs() < 1e-12);
        assert!((2.0 * photon_s_hat(3, 3.0, h) - 1.0).abs() < 1e-12);
        m = SchwarzschildModel::new(4, 1.0).unwrap();
        assert!((horizon_radius(4, m.surface_gravity()) - m.s_h).abs() < 1e-12);
    }

    #[test]
    fn certifies_horizon_cut() {
        let s = SchwarzschildModel::new(3, 1.0).unwrap();
        let t = s.isotropic_triple(Some(Cut::Horizon)).unwrap();
        let v = run_main_theorem_check(&t, &RigidityOptions::default()).unwrap();
        assert!(v.certified(), "{:?}", v.violations);
        assert!((v.fitted_mass.unwrap() - 1.0).abs() < 1e-6);
        assert!((v.fitted_radius.unwrap() - 0.5).abs() < 1e-8);
        assert_eq!(v.components[0].branch, ComponentBranch::Horizon);
    }

    #[test]
    fn certifies_photon_sphere_through_both_routes() {
        let s = SchwarzschildModel::new(3, 1.0).unwrap();
        let t = s.areal_triple(Some(Cut::Areal(3.0))).unwrap();
        let v = run_main_theorem_check(&t, &RigidityOptions::default()).unwrap();
        assert!(v.certified(), "{:?}", v.violations);
        assert_eq!(v.components[0].branch, ComponentBranch::QpsTie);
        assert_eq!(v.components[0].routes.len(), 2);
        let bv = v.profile.as_ref().unwrap().boundary_value;
        assert!((bv - 2.0 / (1.0 + 1.0 / 3.0_f64.sqrt())).abs() < 1e-9);
    }

    #[test]
    fn rejects_non_constant_boundary_lapse() {
        // x₁/(s³ψ) is g-harmonic for g = ψ⁴δ with ψ harmonic.
        let s = SchwarzschildModel::new(3, 1.0).unwrap();
        let r = crate::expr::euclidean_radius(3);
        let psi = 1.0 + 0.5 / r.clone();
        let lapse = s.isotropic_lapse_expr() + 0.05 * Expr::var(0) / (r.powf(3.0) * psi);
        let t = StaticTriple::new(
            "dipole",
            s.isotropic_chart(),
            lapse,
            vec![BoundarySurface::sphere("s=1", 3, 1.0)],
            (1.02, 10.0),
        )
        .unwrap();
        let v = run_main_theorem_check(&t, &RigidityOptions::default()).unwrap();
        assert_eq!(v.conclusion, Conclusion::HypothesisViolated);
        assert_eq!(v.violations.len(), 1, "{:?}", v.violations);
        assert_eq!(v.violations[0].hypothesis, "constant-boundary-lapse");
    }

    #[test]
    fn rejects_flat_space_photon_inequality() {
        let r = crate::expr::euclidean_radius(3);
        let t = StaticTriple::new(
            "flat",
            Chart::euclidean(3),
            1.0 - 0.25 / r,
            vec![BoundarySurface::sphere("unit", 3, 1.0)],
            (1.02, 10.0),
        )
        .unwrap();
        let v = run_main_theorem_check(&t, &RigidityOptions::default()).unwrap();
        assert!(v
            .violations
            .iter()
            .any(|x| x.hypothesis == "photon-surface-scalar-inequality"), "{:?}", v.violations);
    }
}
