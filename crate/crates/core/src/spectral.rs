//! Certified lower bounds for the first Dirac eigenvalue of a boundary
//! component, and the eigenvalue-versus-mean-curvature comparisons built
//! from them. No Dirac operator is discretized.

use serde::Serialize;

use crate::error::{GeoError, Result};

/// Absolute tolerance for calling a margin an equality.
pub const EQUALITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EigenBoundKind {
    Friedrich,
    Hmz,
    ExactRoundSphere,
    Rescaled,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenBound {
    pub value: f64,
    pub kind: EigenBoundKind,
    pub note: String,
}

/// `λ₁ ≥ √(d/(4(d−1)) · inf S̄)` on a closed spin manifold of dimension `d`.
pub fn friedrich_bound(inf_scalar: f64, boundary_dim: usize) -> EigenBound {
    if boundary_dim < 2 {
        return EigenBound {
            value: 0.0,
            kind: EigenBoundKind::Friedrich,
            note: format!("no curvature bound in dimension {boundary_dim}"),
        };
    }
    if !(inf_scalar > 0.0) {
        return EigenBound {
            value: 0.0,
            kind: EigenBoundKind::Friedrich,
            note: format!("inf S̄ = {inf_scalar:e} ≤ 0; bound is vacuous"),
        };
    }
    let d = boundary_dim as f64;
    EigenBound {
        value: (d / (4.0 * (d - 1.0)) * inf_scalar).sqrt(),
        kind: EigenBoundKind::Friedrich,
        note: format!("inf S̄ = {inf_scalar:e}"),
    }
}

/// First Dirac eigenvalue `d/(2ρ)` of the round `d`-sphere of radius `ρ`.
pub fn exact_round_sphere(radius: f64, boundary_dim: usize) -> Result<EigenBound> {
    if !(radius > 0.0) {
        return Err(GeoError::InvalidParameter(format!(
            "sphere radius must be positive, got {radius}"
        )));
    }
    Ok(EigenBound {
        value: boundary_dim as f64 / (2.0 * radius),
        kind: EigenBoundKind::ExactRoundSphere,
        note: format!("round sphere of radius {radius}"),
    })
}

/// What the caller certified before asking for the boundary-mean-curvature
/// bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HmzPreconditions {
    pub ambient_scalar_nonnegative: bool,
    pub mean_curvature_nonnegative: bool,
}

/// `λ₁ ≥ ½ inf H`, valid when ambient scalar curvature and boundary mean
/// curvature are both nonnegative.
pub fn hmz_bound(inf_h: f64, pre: HmzPreconditions) -> Result<EigenBound> {
    if !pre.ambient_scalar_nonnegative || !pre.mean_curvature_nonnegative || inf_h < -EQUALITY_TOL {
        return Err(GeoError::Precondition(format!(
            "mean-curvature eigenvalue bound needs R ≥ 0 and H ≥ 0 (certified: R {}, H {}; inf H = {inf_h:e})",
            pre.ambient_scalar_nonnegative, pre.mean_curvature_nonnegative
        )));
    }
    Ok(EigenBound {
        value: 0.5 * inf_h.max(0.0),
        kind: EigenBoundKind::Hmz,
        note: format!("inf H = {inf_h:e}"),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PmtCheck {
    pub pass: bool,
    /// `λ − H/2`.
    pub margin: f64,
    pub equality: bool,
}

/// Checks `λ ≥ H/2 > 0`.
pub fn pmt_hypothesis(bound: &EigenBound, h: f64) -> PmtCheck {
    let margin = bound.value - 0.5 * h;
    PmtCheck {
        pass: h > 0.0 && margin >= -EQUALITY_TOL,
        margin,
        equality: margin.abs() <= EQUALITY_TOL,
    }
}

/// Which eigenvalue comparison applies to a photon-surface component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// `N ≤ c^{−1/2}`: Friedrich bound on `ḡ⁺`.
    Friedrich,
    /// `N ≥ c^{−1/2}`: comparison through `ḡ⁻`.
    GMinus,
    /// Equality `N = c^{−1/2}`: both apply.
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FriedComp {
    /// `c(N0+1)² − (cN0+1)²`.
    pub margin: f64,
    pub branch: Branch,
}

pub fn friedcomp_check(c: f64, n0: f64) -> FriedComp {
    let margin = c * (n0 + 1.0).powi(2) - (c * n0 + 1.0).powi(2);
    let branch = if margin.abs() <= EQUALITY_TOL {
        Branch::Both
    } else if margin > 0.0 {
        Branch::Friedrich
    } else {
        Branch::GMinus
    };
    FriedComp { margin, branch }
}

/// Lower bound `½·H·N0/(1+N0)·Φ₋^{−n/(n−2)}·(c−1)` for `λ₁(D⁻) + H⁻/2`.
pub fn positive_constants_margin(h: f64, n0: f64, c: f64, phi_minus: f64, n: usize) -> Result<f64> {
    if !(h > 0.0 && n0 > 0.0 && c > 1.0 && phi_minus > 0.0 && phi_minus < 0.5) {
        return Err(GeoError::InvalidParameter(format!(
            "need H > 0, N0 > 0, c > 1, Φ₋ ∈ (0, ½); got H = {h}, N0 = {n0}, c = {c}, Φ₋ = {phi_minus}"
        )));
    }
    let nf = n as f64;
    Ok(0.5 * h * n0 / (1.0 + n0) * phi_minus.powf(-nf / (nf - 2.0)) * (c - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn friedrich_values() {
        assert!((friedrich_bound(2.0 / 9.0, 2).value - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(friedrich_bound(0.0, 2).value, 0.0);
        assert_eq!(friedrich_bound(-1.0, 3).value, 0.0);
        assert!((friedrich_bound(8.0, 2).value - 2.0).abs() < 1e-15);
    }

    #[test]
    fn round_sphere_values() {
        assert!((exact_round_sphere(1.0, 2).unwrap().value - 1.0).abs() < 1e-15);
        assert!((exact_round_sphere(2.0, 2).unwrap().value - 0.5).abs() < 1e-15);
        assert!(exact_round_sphere(1e300, 2).unwrap().value < 1e-299);
        assert!(exact_round_sphere(0.0, 2).is_err());
    }

    #[test]
    fn hmz_values_and_refusal() {
        let ok = HmzPreconditions {
            ambient_scalar_nonnegative: true,
            mean_curvature_nonnegative: true,
        };
        assert_eq!(hmz_bound(4.0, ok).unwrap().value, 2.0);
        assert_eq!(hmz_bound(0.0, ok).unwrap().value, 0.0);
        let bad = HmzPreconditions {
            ambient_scalar_nonnegative: false,
            ..ok
        };
        assert!(hmz_bound(4.0, bad).is_err());
    }

    #[test]
    fn pmt_margins() {
        let b = |v| EigenBound {
            value: v,
            kind: EigenBoundKind::Friedrich,
            note: String::new(),
        };
        let eq = pmt_hypothesis(&b(2.0), 4.0);
        assert!(eq.pass && eq.equality && eq.margin == 0.0);
        assert!(!pmt_hypothesis(&b(1.0), 4.0).pass);
    }

    #[test]
    fn friedcomp_branches() {
        let eq = friedcomp_check(3.0, 1.0 / 3.0_f64.sqrt());
        assert!(eq.margin.abs() < 1e-12);
        assert_eq!(eq.branch, Branch::Both);
        let f = friedcomp_check(4.0, 0.1);
        assert!((f.margin - (4.0 * 1.21 - 1.96)).abs() < 1e-14);
        assert_eq!(f.branch, Branch::Friedrich);
        assert_eq!(friedcomp_check(4.0, 0.9).branch, Branch::GMinus);
    }

    #[test]
    fn positive_constants() {
        assert!((positive_constants_margin(1.0, 1.0, 2.0, 0.25, 3).unwrap() - 16.0).abs() < 1e-12);
        let s3 = 3.0_f64.sqrt();
        let v = positive_constants_margin(2.0 / (3.0 * s3), 1.0 / s3, 3.0, (1.0 - 1.0 / s3) / 2.0, 3).unwrap();
        assert!(v > 0.0);
        let small = positive_constants_margin(1.0, 0.5, 1.0 + 1e-12, 0.25, 3).unwrap();
        assert!(small > 0.0 && small < 1e-10);
        assert!(positive_constants_margin(1.0, 0.5, 0.9, 0.25, 3).is_err());
    }
}
