//! The functions `W`, `V±` and the divergence identities of static vacuum
//! triples in the conformal metrics `g±`, with residual reports that keep
//! trivial `0 = 0` agreement apart from genuine cancellation.

use serde::Serialize;

use crate::autodiff::Scalar;
use crate::boundary::{BoundaryClassification, BoundaryData};
use crate::conformal::{build_pair, ConformalPair, Sign};
use crate::error::{GeoError, Result};
use crate::expr::Expr;
use crate::linalg::Mat;
use crate::tensor::chart::{Chart, Metric};
use crate::tensor::curvature::{geometry, norm_sq};
use crate::tensor::fields::{value_and_gradient, ScalarField, VectorField};
use crate::tensor::operators::{divergence_generic, laplacian, lie_derivative_generic, trace_free};
use crate::triple::{static_vacuum_residual, StaticTriple};

/// Static vacuum residual allowed at a point before an identity applies.
pub const VACUUM_GATE: f64 = 1e-7;
/// Scalar curvature allowed for the pointwise Bianchi step.
pub const SCALAR_FLAT_GATE: f64 = 1e-7;
/// Magnitude below which both sides of an identity count as vanishing.
pub const VANISHING: f64 = 1e-7;
/// Residual tolerance relative to `max(1, |lhs|, |rhs|)`.
pub const IDENTITY_TOL: f64 = 1e-6;

fn inverse_or_nan<S: Scalar>(g: &Mat<S>) -> Mat<S> {
    g.inverse()
        .unwrap_or_else(|_| Mat::from_fn(g.dim(), |_, _| S::from_f64(f64::NAN)))
}

fn w_exponent(n: usize) -> f64 {
    let nf = n as f64;
    2.0 * (nf - 1.0) / (nf - 2.0)
}

/// `W = |∇N|²_g / (1 − N²)^{2(n−1)/(n−2)}` as a differentiable field.
pub struct WField<'a> {
    pub chart: &'a Chart,
    pub lapse: &'a Expr,
}

impl ScalarField for WField<'_> {
    fn eval<S: Scalar>(&self, x: &[S]) -> S {
        let n = self.chart.dim();
        let (v, grad) = value_and_gradient(self.lapse, x);
        let ginv = inverse_or_nan(&self.chart.components(x));
        let grad_sq = ginv.form(&grad, &grad);
        grad_sq * (S::one() - v * v).pow_real(-w_exponent(n))
    }
}

/// `W` at a point; at `N = 0` this is `|∇N|²`.
pub fn w_field(triple: &StaticTriple, point: &[f64]) -> Result<f64> {
    triple.chart.validate_point(point)?;
    let v = triple.lapse_at(point);
    if !(v < 1.0) {
        return Err(GeoError::InvalidParameter(format!("W needs N < 1, got N = {v}")));
    }
    Ok(WField {
        chart: &triple.chart,
        lapse: &triple.lapse,
    }
    .eval(point))
}

/// One-sided limit of `W` on a horizon: the mean of `ν(N)²` over the nodes.
pub fn horizon_w_limit(data: &BoundaryData) -> f64 {
    let sum: f64 = data.nodes.iter().map(|s| s.normal_derivative.powi(2) * s.weight).sum();
    sum / data.nodes.iter().map(|s| s.weight).sum::<f64>()
}

/// `V± = N (1 ± N)^{2/(n−2)} / (1 ∓ N)^{2(n−1)/(n−2)}` for `N ∈ [0, 1)`.
pub fn v_value(lapse: f64, n: usize, sign: Sign) -> Result<f64> {
    if !(0.0..1.0).contains(&lapse) {
        return Err(GeoError::InvalidParameter(format!("V± needs N ∈ [0, 1), got {lapse}")));
    }
    Ok(v_generic(lapse, n, sign))
}

fn v_generic<S: Scalar>(lapse: S, n: usize, sign: Sign) -> S {
    let nf = n as f64;
    let s = sign.as_f64();
    let up = S::one() + lapse.scale(s);
    let down = S::one() - lapse.scale(s);
    lapse * up.pow_real(2.0 / (nf - 2.0)) * down.pow_real(-w_exponent(n))
}

pub fn v_field(triple: &StaticTriple, point: &[f64], sign: Sign) -> Result<f64> {
    triple.chart.validate_point(point)?;
    v_value(triple.lapse_at(point), triple.dim(), sign)
}

/// `X = 2^{4/(n−2)} (1 − N²)^{−n/(n−2)} ∇N`, with `∇N` the `g`-gradient.
pub struct RemarkField<'a> {
    pub chart: &'a Chart,
    pub lapse: &'a Expr,
}

impl VectorField for RemarkField<'_> {
    fn eval<S: Scalar>(&self, x: &[S]) -> Vec<S> {
        let n = self.chart.dim();
        let nf = n as f64;
        let (v, grad) = value_and_gradient(self.lapse, x);
        let ginv = inverse_or_nan(&self.chart.components(x));
        let factor = (S::one() - v * v).pow_real(-nf / (nf - 2.0)).scale(2.0_f64.powf(4.0 / (nf - 2.0)));
        ginv.mul_vec(&grad).into_iter().map(|c| c * factor).collect()
    }
}

/// `N^{−1}(1 ∓ N)² ∇±W` with `∇±` the `g±`-gradient.
struct DivergenceFlux<'a> {
    pair: &'a ConformalPair,
    lapse: &'a Expr,
}

impl VectorField for DivergenceFlux<'_> {
    fn eval<S: Scalar>(&self, x: &[S]) -> Vec<S> {
        let w = WField {
            chart: &self.pair.base,
            lapse: self.lapse,
        };
        let (_, dw) = value_and_gradient(&w, x);
        let v = self.lapse.eval(x);
        let s = self.pair.sign.as_f64();
        let weight = (S::one() - v.scale(s)).powi(2) / v;
        let ginv = inverse_or_nan(&self.pair.derived.components(x));
        ginv.mul_vec(&dw).into_iter().map(|c| c * weight).collect()
    }
}

/// `Ric(X)^i = g^{ij} Ric_jk X^k`.
struct RicciApplied<'a, M, X> {
    metric: &'a M,
    field: &'a X,
}

impl<M: Metric, X: VectorField> VectorField for RicciApplied<'_, M, X> {
    fn eval<S: Scalar>(&self, x: &[S]) -> Vec<S> {
        let n = x.len();
        match geometry(self.metric, x) {
            Ok(geo) => {
                let v = self.field.eval(x);
                let lowered = geo.ricci.mul_vec(&v);
                geo.jet.ginv.mul_vec(&lowered)
            }
            Err(_) => vec![S::from_f64(f64::NAN); n],
        }
    }
}

/// `⟨A, B⟩_g = g^{ik} g^{jl} A_ij B_kl`.
fn inner(ginv: &Mat<f64>, a: &Mat<f64>, b: &Mat<f64>) -> f64 {
    let raised = ginv.mul(a).mul(ginv);
    let n = a.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += raised[(i, j)] * b[(i, j)];
        }
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdentityStatus {
    /// Preconditions failed at some point.
    NotApplicable,
    /// Residual above tolerance.
    Mismatch,
    /// Residual small, but only because both sides are negligible.
    BothSidesVanish,
    /// Residual small with at least one side of genuine size.
    Agreement,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct IdentitySample {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub precondition: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityResidualReport {
    pub identity: String,
    pub points: usize,
    pub max_abs_residual: f64,
    pub max_rel_residual: f64,
    pub max_lhs: f64,
    pub max_rhs: f64,
    /// Largest precondition residual over the points.
    pub max_precondition: f64,
    pub precondition_gate: f64,
    pub status: IdentityStatus,
    pub holds: bool,
    pub declared_flat: bool,
    /// Holds, and either some side is of genuine size or the fixture is flat.
    pub verified: bool,
    /// Holds with at least one side above the vanishing threshold.
    pub verified_nontrivially: bool,
    pub note: String,
}

impl IdentityResidualReport {
    fn from_samples(
        identity: &str,
        samples: &[IdentitySample],
        gate: f64,
        declared_flat: bool,
        note: impl Into<String>,
    ) -> Self {
        let mut max_abs: f64 = 0.0;
        let mut max_rel: f64 = 0.0;
        let mut max_lhs: f64 = 0.0;
        let mut max_rhs: f64 = 0.0;
        let mut max_pre: f64 = 0.0;
        let mut within = true;
        for s in samples {
            let scale = s.lhs.abs().max(s.rhs.abs());
            max_abs = max_abs.max(s.residual);
            if scale > 0.0 {
                max_rel = max_rel.max(s.residual / scale);
            }
            max_lhs = max_lhs.max(s.lhs.abs());
            max_rhs = max_rhs.max(s.rhs.abs());
            max_pre = max_pre.max(s.precondition);
            within &= s.residual <= IDENTITY_TOL * scale.max(1.0);
        }
        let applicable = !samples.is_empty() && max_pre <= gate;
        let nontrivial = max_lhs.max(max_rhs) > VANISHING;
        let status = if !applicable {
            IdentityStatus::NotApplicable
        } else if !within {
            IdentityStatus::Mismatch
        } else if nontrivial {
            IdentityStatus::Agreement
        } else {
            IdentityStatus::BothSidesVanish
        };
        let holds = matches!(status, IdentityStatus::Agreement | IdentityStatus::BothSidesVanish);
        let mut note = note.into();
        if status == IdentityStatus::BothSidesVanish {
            if !note.is_empty() {
                note.push_str("; ");
            }
            note.push_str("both sides vanish; agreement is 0 = 0 and does not exercise the identity");
        }
        Self {
            identity: identity.to_string(),
            points: samples.len(),
            max_abs_residual: max_abs,
            max_rel_residual: max_rel,
            max_lhs,
            max_rhs,
            max_precondition: max_pre,
            precondition_gate: gate,
            status,
            holds,
            declared_flat,
            verified: holds && (nontrivial || declared_flat),
            verified_nontrivially: holds && nontrivial,
            note,
        }
    }

    fn not_applicable(identity: &str, points: usize, gate: f64, max_pre: f64, note: String) -> Self {
        Self {
            identity: identity.to_string(),
            points,
            max_abs_residual: 0.0,
            max_rel_residual: 0.0,
            max_lhs: 0.0,
            max_rhs: 0.0,
            max_precondition: max_pre,
            precondition_gate: gate,
            status: IdentityStatus::NotApplicable,
            holds: false,
            declared_flat: false,
            verified: false,
            verified_nontrivially: false,
            note,
        }
    }
}

fn lapse_in_open_unit(triple: &StaticTriple, point: &[f64]) -> Result<f64> {
    let v = triple.lapse_at(point);
    if !(v > 0.0 && v < 1.0) {
        return Err(GeoError::Precondition(format!("identity needs N ∈ (0, 1), got N = {v}")));
    }
    Ok(v)
}

/// Static vacuum gate shared by the identities of the triple: checks the
/// vacuum residual and `N ∈ (0, 1)`.
fn vacuum_gate(triple: &StaticTriple, point: &[f64]) -> Result<f64> {
    let res = static_vacuum_residual(triple, point)?.max_abs();
    if res > VACUUM_GATE {
        let lap = laplacian(&triple.chart, &triple.lapse, point)?;
        return Err(GeoError::Precondition(format!(
            "static vacuum residual {res:e} exceeds {VACUUM_GATE:e} (ΔN = {lap:e})"
        )));
    }
    lapse_in_open_unit(triple, point)?;
    Ok(res)
}

/// `div_{g±}(N^{−1}(1 ∓ N)² ∇±W)` against `2^{(n−6)/(n−2)} V± |Ric±|²_{g±}`.
pub fn divergence_identity_residual(
    triple: &StaticTriple,
    pair: &ConformalPair,
    point: &[f64],
) -> Result<IdentitySample> {
    let pre = vacuum_gate(triple, point)?;
    let n = triple.dim();
    let nf = n as f64;
    pair.derived.validate_point(point)?;
    let lhs = divergence_generic(
        &pair.derived,
        &DivergenceFlux {
            pair,
            lapse: &triple.lapse,
        },
        point,
    )?;
    let geo = geometry(&pair.derived, point)?;
    let v = v_value(triple.lapse_at(point), n, pair.sign)?;
    let rhs = 2.0_f64.powf((nf - 6.0) / (nf - 2.0)) * v * norm_sq(&geo.jet.ginv, &geo.ricci);
    Ok(IdentitySample {
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
        precondition: pre,
    })
}

/// `div(Ric(X))` against `½⟨Ric, L_X g⟩` on a scalar-flat metric.
pub fn bianchi_step_residual<M: Metric, X: VectorField>(
    metric: &M,
    field: &X,
    point: &[f64],
) -> Result<IdentitySample> {
    metric.validate_point(point)?;
    let geo = geometry(metric, point)?;
    if geo.scalar.abs() > SCALAR_FLAT_GATE {
        return Err(GeoError::Precondition(format!(
            "scalar curvature {:e} exceeds {SCALAR_FLAT_GATE:e}",
            geo.scalar
        )));
    }
    let lhs = divergence_generic(metric, &RicciApplied { metric, field }, point)?;
    let (_, lie) = lie_derivative_generic(metric, field, point)?;
    let rhs = 0.5 * inner(&geo.jet.ginv, &geo.ricci, &lie);
    Ok(IdentitySample {
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
        precondition: geo.scalar.abs(),
    })
}

/// `‖½Tf(L_X g±) − V± Ric±‖_{g±}`; `lhs` and `rhs` carry the norms of the
/// two sides.
pub fn tracefree_lie_residual(
    triple: &StaticTriple,
    pair: &ConformalPair,
    point: &[f64],
) -> Result<IdentitySample> {
    let pre = vacuum_gate(triple, point)?;
    pair.derived.validate_point(point)?;
    let field = RemarkField {
        chart: &triple.chart,
        lapse: &triple.lapse,
    };
    let (jet, lie) = lie_derivative_generic(&pair.derived, &field, point)?;
    let left = trace_free(&lie, &jet.g, &jet.ginv).scaled(0.5);
    let geo = geometry(&pair.derived, point)?;
    let v = v_value(triple.lapse_at(point), triple.dim(), pair.sign)?;
    let right = geo.ricci.scaled(v);
    let diff = Mat::from_fn(left.dim(), |i, j| left[(i, j)] - right[(i, j)]);
    Ok(IdentitySample {
        lhs: norm_sq(&jet.ginv, &left).sqrt(),
        rhs: norm_sq(&jet.ginv, &right).sqrt(),
        residual: norm_sq(&jet.ginv, &diff).max(0.0).sqrt(),
        precondition: pre,
    })
}

/// `div_{g±}(Ric±(X))` against `V± |Ric±|²`, composing the two steps above.
pub fn remark_composition_residual(
    triple: &StaticTriple,
    pair: &ConformalPair,
    point: &[f64],
) -> Result<IdentitySample> {
    let pre = vacuum_gate(triple, point)?;
    pair.derived.validate_point(point)?;
    let field = RemarkField {
        chart: &triple.chart,
        lapse: &triple.lapse,
    };
    let lhs = divergence_generic(
        &pair.derived,
        &RicciApplied {
            metric: &pair.derived,
            field: &field,
        },
        point,
    )?;
    let geo = geometry(&pair.derived, point)?;
    let v = v_value(triple.lapse_at(point), triple.dim(), pair.sign)?;
    let rhs = v * norm_sq(&geo.jet.ginv, &geo.ricci);
    Ok(IdentitySample {
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
        precondition: pre,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdentityKind {
    Divergence,
    TracefreeLie,
    Composition,
}

impl IdentityKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Divergence => "divergence-identity",
            Self::TracefreeLie => "tracefree-lie",
            Self::Composition => "ricci-divergence-composition",
        }
    }
}

/// Runs one identity over a point set and aggregates the samples.
pub fn identity_report(
    triple: &StaticTriple,
    kind: IdentityKind,
    sign: Sign,
    points: &[Vec<f64>],
    declared_flat: bool,
) -> Result<IdentityResidualReport> {
    use rayon::prelude::*;
    let name = format!("{}-{}", kind.name(), sign.label());
    let pair = match build_pair(triple, sign) {
        Ok(p) => p,
        Err(e) => return Ok(IdentityResidualReport::not_applicable(&name, points.len(), VACUUM_GATE, 0.0, e.to_string())),
    };
    let results: Vec<Result<IdentitySample>> = points
        .par_iter()
        .map(|x| match kind {
            IdentityKind::Divergence => divergence_identity_residual(triple, &pair, x),
            IdentityKind::TracefreeLie => tracefree_lie_residual(triple, &pair, x),
            IdentityKind::Composition => remark_composition_residual(triple, &pair, x),
        })
        .collect();
    let mut samples = Vec::with_capacity(results.len());
    for r in results {
        match r {
            Ok(s) => samples.push(s),
            Err(GeoError::Precondition(msg)) => {
                let pre = points
                    .iter()
                    .filter_map(|x| static_vacuum_residual(triple, x).ok())
                    .map(|r| r.max_abs())
                    .fold(0.0, f64::max);
                return Ok(IdentityResidualReport::not_applicable(&name, points.len(), VACUUM_GATE, pre, msg));
            }
            Err(e) => return Err(e),
        }
    }
    let note = if declared_flat {
        "fixture declared flat".to_string()
    } else {
        String::new()
    };
    Ok(IdentityResidualReport::from_samples(&name, &samples, VACUUM_GATE, declared_flat, note))
}

/// Aggregates Bianchi-step samples over several points.
pub fn bianchi_report<M: Metric, X: VectorField>(
    metric: &M,
    field: &X,
    points: &[Vec<f64>],
    declared_flat: bool,
) -> Result<IdentityResidualReport> {
    let mut samples = Vec::with_capacity(points.len());
    for x in points {
        match bianchi_step_residual(metric, field, x) {
            Ok(s) => samples.push(s),
            Err(GeoError::Precondition(msg)) => {
                return Ok(IdentityResidualReport::not_applicable(
                    "bianchi-step",
                    points.len(),
                    SCALAR_FLAT_GATE,
                    f64::NAN,
                    msg,
                ))
            }
            Err(e) => return Err(e),
        }
    }
    Ok(IdentityResidualReport::from_samples(
        "bianchi-step",
        &samples,
        SCALAR_FLAT_GATE,
        declared_flat,
        "",
    ))
}

/// Tolerance for the boundary scalar-curvature margins.
pub const MARGIN_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
pub struct MarginField {
    pub margins: Vec<f64>,
    pub min: f64,
    pub max: f64,
    /// All margins within tolerance of zero.
    pub equality: bool,
    /// No margin below `−tol`.
    pub realizable: bool,
    pub note: String,
}

impl MarginField {
    fn from_margins(margins: Vec<f64>, what: &str) -> Self {
        let min = margins.iter().copied().fold(f64::INFINITY, f64::min);
        let max = margins.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let realizable = min >= -MARGIN_TOL;
        let equality = realizable && max <= MARGIN_TOL;
        let note = if realizable {
            String::new()
        } else {
            format!("negative margin {min:e}: not realizable as a static vacuum {what}")
        };
        Self {
            margins,
            min,
            max,
            equality,
            realizable,
            note,
        }
    }
}

/// `S̄ − 8κ²` from intrinsic scalar curvature samples.
pub fn scalar_margins(scalars: &[f64], kappa: f64) -> MarginField {
    MarginField::from_margins(scalars.iter().map(|s| s - 8.0 * kappa * kappa).collect(), "horizon")
}

/// Per-node `S̄ − 8κ²` on a three-dimensional horizon.
pub fn horizon_scalar_bound(data: &BoundaryData, class: &BoundaryClassification) -> Result<MarginField> {
    let BoundaryClassification::NondegenerateStaticHorizon { kappa } = class else {
        return Err(GeoError::Precondition(format!(
            "'{}' is classified {}, not a nondegenerate static horizon",
            data.label,
            class.name()
        )));
    };
    if data.n != 3 {
        return Err(GeoError::Precondition(format!(
            "horizon scalar bound is stated for n = 3, got n = {}",
            data.n
        )));
    }
    let scalars: Vec<f64> = data.nodes.iter().map(|s| s.scalar).collect();
    Ok(scalar_margins(&scalars, *kappa))
}

/// `c⁻¹ − N0²`.
pub fn photon_lapse_margin(c: f64, n0: f64) -> MarginField {
    MarginField::from_margins(vec![1.0 / c - n0 * n0], "photon surface")
}

pub fn photon_lapse_bound(data: &BoundaryData, class: &BoundaryClassification) -> Result<MarginField> {
    let BoundaryClassification::GeneralizedQps { c, n0, .. } = class else {
        return Err(GeoError::Precondition(format!(
            "'{}' is classified {}, not a generalized photon surface",
            data.label,
            class.name()
        )));
    };
    if data.n != 3 {
        return Err(GeoError::Precondition(format!(
            "photon lapse bound is stated for n = 3, got n = {}",
            data.n
        )));
    }
    Ok(photon_lapse_margin(*c, *n0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::{classify, measure_boundary, ClassifyTolerances};
    use crate::schwarzschild::{Cut, SchwarzschildModel};
    use crate::tensor::fields::ExprVector;

    fn rindler(n: usize) -> StaticTriple {
        StaticTriple::new("rindler", Chart::euclidean(n), Expr::var(0), vec![], (0.2, 0.8)).unwrap()
    }

    #[test]
    fn v_values() {
        assert_eq!(v_value(0.0, 3, Sign::Minus).unwrap(), 0.0);
        assert!((v_value(0.5, 3, Sign::Minus).unwrap() - 2.0 / 81.0).abs() < 1e-15);
        assert!((v_value(0.5, 4, Sign::Plus).unwrap() - 6.0).abs() < 1e-13);
        assert!(v_value(1.0, 3, Sign::Plus).is_err());
    }

    #[test]
    fn w_is_constant_on_schwarzschild() {
        let s = SchwarzschildModel::new(3, 1.0).unwrap();
        let t = s.areal_triple(None).unwrap();
        for r in [2.1, 3.0, 7.0, 50.0] {
            let w = w_field(&t, &[r, 1.0, 0.4]).unwrap();
            assert!((w - 1.0 / 16.0).abs() < 1e-12, "r = {r}: {w}");
        }
        let iso = s.isotropic_triple(None).unwrap();
        assert!((w_field(&iso, &[0.5, 0.0, 0.0]).unwrap() - 1.0 / 16.0).abs() < 1e-12);
        let c = StaticTriple::new("c", Chart::euclidean(3), Expr::constant(0.4), vec![], (1.0, 2.0)).unwrap();
        assert_eq!(w_field(&c, &[1.0, 0.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn identities_on_rindler_are_nontrivial() {
        let t = rindler(3);
        let x = [0.4, 0.3, -0.2];
        for sign in [Sign::Plus, Sign::Minus] {
            let pair = build_pair(&t, sign).unwrap();
            let d = divergence_identity_residual(&t, &pair, &x).unwrap();
            assert!(d.rhs.abs() > 1e-3 && d.residual < 1e-9 * d.rhs.abs().max(1.0), "{d:?}");
            let l = tracefree_lie_residual(&t, &pair, &x).unwrap();
            assert!(l.rhs > 1e-3 && l.residual < 1e-9, "{l:?}");
            let c = remark_composition_residual(&t, &pair, &x).unwrap();
            assert!(c.rhs.abs() > 1e-3 && c.residual < 1e-9, "{c:?}");
        }
    }

    #[test]
    fn identities_on_schwarzschild_vanish_on_both_sides() {
        let s = SchwarzschildModel::new(3, 1.0).unwrap();
        let t = s.areal_triple(None).unwrap();
        let pair = build_pair(&t, Sign::Minus).unwrap();
        let d = divergence_identity_residual(&t, &pair, &[4.0, 1.0, 0.3]).unwrap();
        assert!(d.lhs.abs() < 1e-7 && d.rhs.abs() < 1e-7);
        let rep = identity_report(&t, IdentityKind::TracefreeLie, Sign::Minus, &[vec![3.0, 1.0, 0.3]], false).unwrap();
        assert_eq!(rep.status, IdentityStatus::BothSidesVanish);
        assert!(rep.holds && !rep.verified_nontrivially && !rep.verified);
    }

    #[test]
    fn non_static_lapse_is_not_applicable() {
        let lapse = 0.05 * crate::expr::euclidean_radius(3).powf(2.0);
        let t = StaticTriple::new("q", Chart::euclidean(3), lapse, vec![], (1.0, 2.0)).unwrap();
        let rep = identity_report(&t, IdentityKind::Divergence, Sign::Minus, &[vec![1.0, 0.5, 0.5]], false).unwrap();
        assert_eq!(rep.status, IdentityStatus::NotApplicable);
        assert!(rep.note.contains("ΔN"));
    }

    #[test]
    fn bianchi_step_on_scalar_flat_metric() {
        let u = 1.0 + 0.3 / crate::expr::euclidean_radius(3);
        let chart = Chart::euclidean(3).conformal(&u.powf(4.0), "harmonic");
        let x = Expr::var(0);
        let y = Expr::var(1);
        let field = ExprVector(vec![x.clone() * y.clone(), 1.0 + y.clone() * y.clone(), x - 0.5]);
        let s = bianchi_step_residual(&chart, &field, &[1.5, 0.2, 0.1]).unwrap();
        assert!(s.lhs.abs() > 1e-3);
        assert!(s.residual <= 1e-6 * s.lhs.abs(), "{s:?}");
        let flat = bianchi_step_residual(&Chart::euclidean(3), &field, &[1.5, 0.2, 0.1]).unwrap();
        assert_eq!((flat.lhs, flat.rhs), (0.0, 0.0));
    }

    #[test]
    fn horizon_margin_vanishes_on_schwarzschild() {
        let s = SchwarzschildModel::new(3, 1.0).unwrap();
        let t = s.isotropic_triple(Some(Cut::Horizon)).unwrap();
        let data = measure_boundary(&t, &t.boundaries[0]).unwrap();
        let class = classify(&data, &ClassifyTolerances::default());
        let m = horizon_scalar_bound(&data, &class).unwrap();
        assert!(m.equality && m.realizable, "{:?}", (m.min, m.max));
        assert!((horizon_w_limit(&data) - 1.0 / 16.0).abs() < 1e-9);
    }

    #[test]
    fn synthetic_margins() {
        assert!((scalar_margins(&[1.0], 0.25).min - 0.5).abs() < 1e-15);
        let bad = scalar_margins(&[0.4], 0.25);
        assert!(!bad.realizable && bad.note.contains("not realizable"));
        assert!((photon_lapse_margin(4.0, 0.4).min - 0.09).abs() < 1e-15);
        let s3 = 3.0_f64.sqrt();
        assert!(photon_lapse_margin(3.0, 1.0 / s3).equality);
        assert!(!photon_lapse_margin(2.0, 0.8).realizable);
    }
}
