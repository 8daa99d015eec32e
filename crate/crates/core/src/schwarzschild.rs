//! Spatial Schwarzschild fixtures in areal and isotropic coordinates.
//!
//! Areal form: `g_m = N_m^{-2} dr² + r² g_S` with
//! `N_m = (1 − 2m/r^{n−2})^{1/2}`. Isotropic form:
//! `g = (1 + m/2s^{n−2})^{4/(n−2)} δ` with lapse
//! `Ñ_m = (1 − m/2s^{n−2})/(1 + m/2s^{n−2})`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::boundary::BoundarySurface;
use crate::error::{GeoError, Result};
use crate::expr::Expr;
use crate::tensor::chart::{
    cartesian_names, polar_domain, polar_names, round_sphere_factors, Chart, Domain, Layout,
};
use crate::triple::StaticTriple;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchwarzschildModel {
    pub n: usize,
    pub m: f64,
    /// Horizon areal radius `(2m)^{1/(n−2)}`, zero for `m ≤ 0`.
    pub r_m: f64,
    /// Horizon isotropic radius `(m/2)^{1/(n−2)}`, zero for `m ≤ 0`.
    pub s_h: f64,
}

/// Where the exterior region is cut off.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cut {
    Horizon,
    /// Areal-radius sphere `{r = value}`.
    Areal(f64),
    /// Isotropic-radius sphere `{s = value}`.
    Isotropic(f64),
}

impl FromStr for Cut {
    type Err = GeoError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("horizon") {
            return Ok(Cut::Horizon);
        }
        let value = |v: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| GeoError::Config(format!("bad cut radius '{v}'")))
        };
        if let Some(v) = s.strip_prefix("r=") {
            return Ok(Cut::Areal(value(v)?));
        }
        if let Some(v) = s.strip_prefix("s=") {
            return Ok(Cut::Isotropic(value(v)?));
        }
        Err(GeoError::Config(format!(
            "cut must be 'horizon', 'r=<radius>' or 's=<radius>', got '{s}'"
        )))
    }
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cut::Horizon => write!(f, "horizon"),
            Cut::Areal(r) => write!(f, "r={r}"),
            Cut::Isotropic(s) => write!(f, "s={s}"),
        }
    }
}

impl SchwarzschildModel {
    pub fn new(n: usize, m: f64) -> Result<Self> {
        if n < 3 {
            return Err(GeoError::InvalidParameter(format!("dimension n = {n} must be ≥ 3")));
        }
        if !m.is_finite() {
            return Err(GeoError::InvalidParameter(format!("mass {m} is not finite")));
        }
        let p = 1.0 / (n as f64 - 2.0);
        let (r_m, s_h) = if m > 0.0 {
            ((2.0 * m).powf(p), (0.5 * m).powf(p))
        } else {
            (0.0, 0.0)
        };
        Ok(Self { n, m, r_m, s_h })
    }

    fn p(&self) -> f64 {
        self.n as f64 - 2.0
    }

    /// Length scale of the model: the horizon radius, or `(2|m|)^{1/(n−2)}`
    /// (or 1 for `m = 0`) without a horizon.
    pub fn scale(&self) -> f64 {
        if self.m == 0.0 {
            1.0
        } else {
            (2.0 * self.m.abs()).powf(1.0 / self.p())
        }
    }

    pub fn areal_lapse(&self, r: f64) -> f64 {
        (1.0 - 2.0 * self.m / r.powf(self.p())).sqrt()
    }

    /// `ψ(s) = 1 + m/(2s^{n−2})`.
    pub fn psi(&self, s: f64) -> f64 {
        1.0 + 0.5 * self.m / s.powf(self.p())
    }

    pub fn isotropic_lapse(&self, s: f64) -> f64 {
        let a = 0.5 * self.m / s.powf(self.p());
        (1.0 - a) / (1.0 + a)
    }

    /// Conformal factor `ψ^{4/(n−2)}` of the isotropic metric.
    pub fn conformal_factor(&self, s: f64) -> f64 {
        self.psi(s).powf(4.0 / self.p())
    }

    /// `r(s) = s ψ(s)^{2/(n−2)}`.
    pub fn areal_from_isotropic(&self, s: f64) -> f64 {
        s * self.psi(s).powf(2.0 / self.p())
    }

    /// Inverse of [`areal_from_isotropic`](Self::areal_from_isotropic) on the
    /// exterior branch `s ≥ s_h`, by bisection.
    pub fn isotropic_from_areal(&self, r: f64) -> Result<f64> {
        if !(r >= self.r_m) || !r.is_finite() {
            return Err(GeoError::InvalidParameter(format!(
                "areal radius {r} is inside the horizon r_m = {}",
                self.r_m
            )));
        }
        let mut lo = if self.m > 0.0 { self.s_h } else { self.isotropic_floor() };
        let mut hi = r.max(lo) * 2.0 + 1.0;
        while self.areal_from_isotropic(hi) < r {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.areal_from_isotropic(mid) < r {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * hi {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Smallest isotropic radius where the conformal factor stays positive.
    fn isotropic_floor(&self) -> f64 {
        if self.m < 0.0 {
            (-0.5 * self.m).powf(1.0 / self.p())
        } else {
            0.0
        }
    }

    /// `c = 1/N_m(r)²`, the photon-surface constant of the sphere `{r}`.
    pub fn photon_sphere_constant(&self, r: f64) -> Result<f64> {
        if !(self.m > 0.0) {
            return Err(GeoError::InvalidParameter(
                "photon-surface constant needs m > 0".into(),
            ));
        }
        if !(r > self.r_m) {
            return Err(GeoError::InvalidParameter(format!(
                "r = {r} is not outside the horizon r_m = {}",
                self.r_m
            )));
        }
        Ok(1.0 / (1.0 - 2.0 * self.m / r.powf(self.p())))
    }

    /// `κ = (n−2)/(2 r_m)`.
    pub fn surface_gravity(&self) -> f64 {
        self.p() / (2.0 * self.r_m)
    }

    /// `ν(N)` on `{r}`: `(n−2)m / r^{n−1}`.
    pub fn normal_derivative(&self, r: f64) -> f64 {
        self.p() * self.m / r.powf(self.p() + 1.0)
    }

    /// Mean curvature `(n−1)N/r` of `{r}`.
    pub fn mean_curvature(&self, r: f64) -> f64 {
        (self.n as f64 - 1.0) * self.areal_lapse(r) / r
    }

    /// Areal chart `(r, θ…, φ)` on `r > r_m`.
    pub fn areal_chart(&self) -> Chart {
        let n = self.n;
        let r = Expr::var(0);
        let grr = 1.0 / (1.0 - 2.0 * self.m * r.clone().powf(-self.p()));
        let mut entries = vec![grr];
        entries.extend(
            round_sphere_factors(n - 1, 1)
                .into_iter()
                .map(|f| r.clone().powf(2.0) * f),
        );
        Chart::diagonal(
            "schwarzschild-areal",
            polar_names(n),
            entries,
            polar_domain(n, self.r_m),
            Layout::Polar,
        )
        .expect("well-formed areal chart")
    }

    pub fn areal_lapse_expr(&self) -> Expr {
        (1.0 - 2.0 * self.m * Expr::var(0).powf(-self.p())).sqrt()
    }

    /// `m/(2 s^{n−2})` as an expression in Cartesian coordinates.
    fn half_mass_term(&self) -> Expr {
        let q = Expr::sum((0..self.n).map(|i| Expr::var(i).powf(2.0)));
        0.5 * self.m * q.powf(-0.5 * self.p())
    }

    /// Isotropic Cartesian chart on `s > 0` (or beyond the conformal-factor
    /// zero for negative mass).
    pub fn isotropic_chart(&self) -> Chart {
        let n = self.n;
        let factor = (1.0 + self.half_mass_term()).powf(4.0 / self.p());
        Chart::diagonal(
            "schwarzschild-isotropic",
            cartesian_names(n),
            vec![factor; n],
            Domain::unbounded(n).with_radial(self.isotropic_floor(), f64::INFINITY),
            Layout::Cartesian,
        )
        .expect("well-formed isotropic chart")
    }

    pub fn isotropic_lapse_expr(&self) -> Expr {
        let a = self.half_mass_term();
        (1.0 - a.clone()) / (1.0 + a)
    }

    /// Interior sampling shell beyond a boundary at coordinate radius `rho`.
    fn shell(&self, rho: f64) -> (f64, f64) {
        let base = if rho > 0.0 { rho } else { self.scale() };
        (1.02 * base, 10.0 * base)
    }

    /// Areal-chart triple, optionally cut at `{r = r0}`.
    pub fn areal_triple(&self, cut: Option<Cut>) -> Result<StaticTriple> {
        let (boundaries, rho) = match cut {
            None => (vec![], self.r_m),
            Some(Cut::Horizon) => {
                return Err(GeoError::InvalidParameter(
                    "the horizon is the degenerate edge of the areal chart; use the isotropic chart"
                        .into(),
                ))
            }
            Some(Cut::Areal(r0)) => {
                self.check_areal_cut(r0)?;
                (vec![BoundarySurface::radial_level(format!("r={r0}"), r0)], r0)
            }
            Some(Cut::Isotropic(s0)) => {
                let r0 = self.areal_from_isotropic(s0);
                self.check_areal_cut(r0)?;
                (vec![BoundarySurface::radial_level(format!("s={s0}"), r0)], r0)
            }
        };
        StaticTriple::new(
            format!("schwarzschild-areal(n={}, m={})", self.n, self.m),
            self.areal_chart(),
            self.areal_lapse_expr(),
            boundaries,
            self.shell(rho),
        )
    }

    fn check_areal_cut(&self, r0: f64) -> Result<()> {
        if r0 > self.r_m * (1.0 + 1e-6) && r0.is_finite() {
            Ok(())
        } else {
            Err(GeoError::InvalidParameter(format!(
                "cut radius r = {r0} must lie outside the horizon r_m = {}",
                self.r_m
            )))
        }
    }

    /// Isotropic-chart triple, optionally cut at a coordinate sphere.
    pub fn isotropic_triple(&self, cut: Option<Cut>) -> Result<StaticTriple> {
        let s0 = match cut {
            None => None,
            Some(Cut::Horizon) => {
                if !(self.m > 0.0) {
                    return Err(GeoError::InvalidParameter("no horizon for m ≤ 0".into()));
                }
                Some(self.s_h)
            }
            Some(Cut::Areal(r0)) => {
                self.check_areal_cut(r0)?;
                Some(self.isotropic_from_areal(r0)?)
            }
            Some(Cut::Isotropic(s0)) => {
                if !(s0 >= self.s_h.max(self.isotropic_floor()) && s0.is_finite()) {
                    return Err(GeoError::InvalidParameter(format!(
                        "cut radius s = {s0} is inside the horizon s_h = {}",
                        self.s_h
                    )));
                }
                Some(s0)
            }
        };
        let boundaries = match (cut, s0) {
            (Some(c), Some(s0)) => vec![BoundarySurface::sphere(c.to_string(), self.n, s0)],
            _ => vec![],
        };
        let rho = s0.unwrap_or(self.s_h.max(self.isotropic_floor()));
        StaticTriple::new(
            format!("schwarzschild-isotropic(n={}, m={})", self.n, self.m),
            self.isotropic_chart(),
            self.isotropic_lapse_expr(),
            boundaries,
            self.shell(rho),
        )
    }
}
