//! The conformal metrics `g± = Φ±^{4/(n−2)} g` with `Φ± = (1 ± N)/2`, and the
//! transformation laws they obey.

use serde::Serialize;

use crate::boundary::BoundaryData;
use crate::error::{GeoError, Result};
use crate::expr::Expr;
use crate::sampling::halton_shell_points;
use crate::tensor::chart::{Chart, Metric};
use crate::tensor::curvature::geometry;
use crate::tensor::operators::laplacian;
use crate::triple::StaticTriple;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConformalPair {
    pub base: Chart,
    /// `Φ± = (1 ± N)/2`.
    pub factor: Expr,
    /// `4/(n−2)`.
    pub exponent: f64,
    /// `g± = Φ^{4/(n−2)} g`.
    pub derived: Chart,
    pub sign: Sign,
}

impl ConformalPair {
    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn factor_at(&self, x: &[f64]) -> f64 {
        self.factor.eval(x)
    }
}

/// `Φ± = (1 ± N)/2` as an expression.
pub fn conformal_factor(lapse: &Expr, sign: Sign) -> Expr {
    match sign {
        Sign::Plus => 0.5 * (1.0 + lapse.clone()),
        Sign::Minus => 0.5 * (1.0 - lapse.clone()),
    }
}

/// Number of interior points probed for `Φ > 0`.
const FACTOR_PROBES: usize = 64;

fn build(triple: &StaticTriple, sign: Sign) -> Result<ConformalPair> {
    let n = triple.dim();
    let exponent = 4.0 / (n as f64 - 2.0);
    let factor = conformal_factor(&triple.lapse, sign);
    let layout = triple.chart.layout;
    for x in halton_shell_points(FACTOR_PROBES, n, layout, triple.sample_shell) {
        if !triple.chart.domain.contains(&x) {
            continue;
        }
        let v = factor.eval(&x);
        if !(v > 0.0) {
            return Err(GeoError::NonPositiveFactor { point: x, value: v });
        }
    }
    let derived = triple.chart.conformal(
        &factor.powf(exponent),
        format!("{}-g-{}", triple.chart.kind, sign.label()),
    );
    Ok(ConformalPair {
        base: triple.chart.clone(),
        factor,
        exponent,
        derived,
        sign,
    })
}

pub fn build_g_plus(triple: &StaticTriple) -> Result<ConformalPair> {
    build(triple, Sign::Plus)
}

pub fn build_g_minus(triple: &StaticTriple) -> Result<ConformalPair> {
    build(triple, Sign::Minus)
}

pub fn build_pair(triple: &StaticTriple, sign: Sign) -> Result<ConformalPair> {
    build(triple, sign)
}

/// Harmonicity threshold below which the scalar transformation law applies.
pub const HARMONIC_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScalarTransformCheck {
    /// `R±` computed directly in the derived chart.
    pub direct: f64,
    /// `R·Φ^{−4/(n−2)}`.
    pub transformed: f64,
    pub residual: f64,
    /// `ΔN` at the point.
    pub laplacian: f64,
}

/// Compares `R±` with `R·Φ±^{−4/(n−2)}`, which holds when `N` is harmonic.
pub fn scalar_transform_check(
    pair: &ConformalPair,
    lapse: &Expr,
    point: &[f64],
) -> Result<ScalarTransformCheck> {
    pair.base.validate_point(point)?;
    let lap = laplacian(&pair.base, lapse, point)?;
    if lap.abs() > HARMONIC_TOL {
        return Err(GeoError::HarmonicityViolated { residual: lap.abs() });
    }
    let r = geometry(&pair.base, point)?.scalar;
    let direct = geometry(&pair.derived, point)?.scalar;
    let phi = pair.factor_at(point);
    let transformed = r * phi.powf(-pair.exponent);
    Ok(ScalarTransformCheck {
        direct,
        transformed,
        residual: (direct - transformed).abs(),
        laplacian: lap,
    })
}

/// Mean curvature of a boundary in `g±` from its data in `g`:
/// `H⁺ = Φ₊^{−n/(n−2)}(2(n−1)/(n−2) ∂_νΦ₊ + HΦ₊)` and
/// `H⁻ = −Φ₋^{−n/(n−2)}(2(n−1)/(n−2) ∂_νΦ₋ + HΦ₋)`, the latter measured
/// with the normal pointing away from infinity.
pub fn mean_curvature_transform(h: f64, dphi_dnu: f64, phi: f64, n: usize, sign: Sign) -> Result<f64> {
    if !(phi > 0.0) {
        return Err(GeoError::InvalidParameter(format!(
            "conformal factor must be positive, got {phi}"
        )));
    }
    let nf = n as f64;
    let core = phi.powf(-nf / (nf - 2.0)) * (2.0 * (nf - 1.0) / (nf - 2.0) * dphi_dnu + h * phi);
    Ok(match sign {
        Sign::Plus => core,
        Sign::Minus => -core,
    })
}

/// `∂_νΦ± = ±½ ν(N)`.
pub fn factor_normal_derivative(normal_derivative: f64, sign: Sign) -> f64 {
    0.5 * sign.as_f64() * normal_derivative
}

/// `Φ± = (1 ± N)/2` at a lapse value.
pub fn factor_value(lapse: f64, sign: Sign) -> f64 {
    0.5 * (1.0 + sign.as_f64() * lapse)
}

/// Transports a Dirac eigenvalue from `ḡ⁻` to `ḡ⁺ = (Φ₊/Φ₋)^{4/(n−2)} ḡ⁻`.
pub fn homothetic_eigenvalue_rescale(lambda: f64, phi_minus: f64, phi_plus: f64, n: usize) -> f64 {
    lambda * (phi_minus / phi_plus).powf(2.0 / (n as f64 - 2.0))
}

/// Constancy threshold for `Φ±` on a component.
pub const FACTOR_CONSTANCY: f64 = 1e-9;

/// [`homothetic_eigenvalue_rescale`] with `Φ±` read off the boundary lapse,
/// which must be constant on the component.
pub fn homothetic_rescale_on(data: &BoundaryData, lambda: f64) -> Result<f64> {
    let lapse = data.lapse();
    if lapse.spread() > FACTOR_CONSTANCY {
        return Err(GeoError::Precondition(format!(
            "Φ± not constant on '{}' (lapse spread {:e})",
            data.label,
            lapse.spread()
        )));
    }
    let n0 = lapse.mean;
    Ok(homothetic_eigenvalue_rescale(
        lambda,
        factor_value(n0, Sign::Minus),
        factor_value(n0, Sign::Plus),
        data.n,
    ))
}
