//! Run configuration: TOML or JSON documents describing a triple, its
//! boundary, tolerances and output, with unknown keys rejected.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::boundary::surface::Embedding;
use crate::boundary::BoundarySurface;
use crate::error::{GeoError, Result};
use crate::expr::{euclidean_radius, parse_expr, Expr, ParseContext};
use crate::rigidity::RigidityOptions;
use crate::schwarzschild::{Cut, SchwarzschildModel};
use crate::tensor::chart::{Chart, Domain, Layout};
use crate::triple::StaticTriple;

/// Fixture names accepted in `triple.fixture`.
pub const FIXTURES: [&str; 9] = [
    "schwarzschild-isotropic",
    "schwarzschild-areal",
    "flat",
    "rindler",
    "non-static",
    "adversarial-non-harmonic",
    "adversarial-boundary-lapse",
    "adversarial-photon-inequality",
    "expression",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ChainName {
    #[default]
    Main,
    Bh3,
    Photon3,
}

impl std::str::FromStr for ChainName {
    type Err = GeoError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "main" => Ok(Self::Main),
            "bh3" => Ok(Self::Bh3),
            "photon3" => Ok(Self::Photon3),
            other => Err(GeoError::Config(format!("unknown chain '{other}' (main, bh3, photon3)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "kebab-case")]
pub enum BoundarySpec {
    Sphere {
        label: Option<String>,
        radius: f64,
        center: Option<Vec<f64>>,
    },
    Level {
        label: Option<String>,
        coord: usize,
        value: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpressionSpec {
    pub coordinates: Vec<String>,
    pub layout: Layout,
    /// Upper-triangle or full rows of component expressions.
    pub components: Vec<Vec<String>>,
    pub lapse: String,
    #[serde(default)]
    pub constants: BTreeMap<String, f64>,
    /// Open box bounds per coordinate; `null` entries are unbounded.
    #[serde(default)]
    pub bounds: Option<Vec<(Option<f64>, Option<f64>)>>,
    /// Open shell `lo < |x| < hi` (Cartesian) or `lo < r < hi` (polar).
    #[serde(default)]
    pub radial: Option<(f64, Option<f64>)>,
    pub sample_shell: (f64, f64),
    #[serde(default)]
    pub boundaries: Vec<BoundarySpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TripleSpec {
    pub fixture: String,
    pub n: usize,
    pub m: f64,
    pub cut: Option<String>,
    /// Declares the metric flat, which lets identity reports accept 0 = 0.
    pub declared_flat: bool,
    pub expression: Option<ExpressionSpec>,
}

impl Default for TripleSpec {
    fn default() -> Self {
        Self {
            fixture: "schwarzschild-isotropic".into(),
            n: 3,
            m: 1.0,
            cut: None,
            declared_flat: false,
            expression: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyOptions {
    pub points: usize,
    pub identity_points: usize,
    pub vacuum_tol: f64,
    pub bianchi_tol: f64,
    pub transform_tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            points: 50,
            identity_points: 6,
            vacuum_tol: 1e-8,
            bianchi_tol: 1e-10,
            transform_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSpec {
    /// Directory for the JSON report and, for rigidity runs, `profile.csv`.
    pub dir: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub triple: TripleSpec,
    pub chain: ChainName,
    pub rigidity: RigidityOptions,
    pub verify: VerifyOptions,
    pub output: OutputSpec,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            triple: TripleSpec::default(),
            chain: ChainName::Main,
            rigidity: RigidityOptions::default(),
            verify: VerifyOptions::default(),
            output: OutputSpec::default(),
            seed: 42,
        }
    }
}

impl RunConfig {
    /// Parses TOML, or JSON when the text starts with `{`.
    pub fn from_str_any(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            serde_json::from_str(text).map_err(|e| GeoError::Config(e.to_string()))
        } else {
            toml::from_str(text).map_err(|e| GeoError::Config(e.to_string()))
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| GeoError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_str_any(&text)
    }

    pub fn build_triple(&self) -> Result<StaticTriple> {
        build_triple(&self.triple)
    }
}

fn parse_cut(cut: &Option<String>) -> Result<Option<Cut>> {
    cut.as_deref()
        .map(|c| c.parse::<Cut>().map_err(|e| GeoError::Config(e.to_string())))
        .transpose()
}

fn config_err(e: GeoError) -> GeoError {
    match e {
        GeoError::Config(_) => e,
        other => GeoError::Config(other.to_string()),
    }
}

/// Builds the triple described by a spec.
pub fn build_triple(spec: &TripleSpec) -> Result<StaticTriple> {
    let n = spec.n;
    let cut = parse_cut(&spec.cut)?;
    let schwarzschild = || SchwarzschildModel::new(n, spec.m).map_err(config_err);
    if spec.fixture != "expression" && spec.expression.is_some() {
        return Err(GeoError::Config(format!(
            "triple.expression is only read with fixture = \"expression\", got '{}'",
            spec.fixture
        )));
    }
    if n < 3 && spec.fixture != "expression" {
        return Err(GeoError::Config(format!("fixtures need n ≥ 3, got {n}")));
    }
    let sphere_cut = |default: f64| -> Result<f64> {
        match cut {
            None => Ok(default),
            Some(Cut::Isotropic(s)) => Ok(s),
            Some(other) => Err(GeoError::Config(format!(
                "fixture '{}' takes a coordinate-sphere cut 's=R', got '{other}'",
                spec.fixture
            ))),
        }
    };
    let r = euclidean_radius(n);
    let k = n as f64 - 2.0;
    let triple = match spec.fixture.as_str() {
        "schwarzschild-isotropic" => schwarzschild()?.isotropic_triple(cut),
        "schwarzschild-areal" => schwarzschild()?.areal_triple(cut),
        "flat" => {
            let boundaries = match cut {
                None => vec![],
                Some(_) => {
                    let s0 = sphere_cut(1.0)?;
                    vec![BoundarySurface::sphere(format!("s={s0}"), n, s0)]
                }
            };
            StaticTriple::new("flat", Chart::euclidean(n), Expr::one(), boundaries, (1.0, 10.0))
        }
        "rindler" => {
            let mut domain = Domain::unbounded(n);
            domain.bounds[0] = (0.05, 0.95);
            let chart = Chart::euclidean(n).with_domain(domain);
            StaticTriple::new("rindler", chart, Expr::var(0), vec![], (0.2, 0.9))
        }
        "non-static" => StaticTriple::new("non-static", Chart::euclidean(n), r.powf(2.0), vec![], (0.5, 2.0)),
        "adversarial-non-harmonic" => {
            let s = schwarzschild()?;
            let s0 = sphere_cut(2.0 * s.s_h)?;
            let lapse = s.isotropic_lapse_expr() + 0.05 / (1.0 + r.powf(2.0));
            StaticTriple::new(
                "adversarial-non-harmonic",
                s.isotropic_chart(),
                lapse,
                vec![BoundarySurface::sphere(format!("s={s0}"), n, s0)],
                (1.02 * s0, 10.0 * s0),
            )
        }
        "adversarial-boundary-lapse" => {
            // x₁/(s^n ψ) is harmonic for g = ψ^{4/(n−2)}δ with ψ harmonic.
            let s = schwarzschild()?;
            let s0 = sphere_cut(2.0 * s.s_h)?;
            let psi = 1.0 + 0.5 * spec.m * r.powf(-k);
            let dipole = 0.05 * s0.powi(n as i32 - 1) * Expr::var(0) / (r.powf(n as f64) * psi);
            StaticTriple::new(
                "adversarial-boundary-lapse",
                s.isotropic_chart(),
                s.isotropic_lapse_expr() + dipole,
                vec![BoundarySurface::sphere(format!("s={s0}"), n, s0)],
                (1.02 * s0, 10.0 * s0),
            )
        }
        "adversarial-photon-inequality" => {
            let s0 = sphere_cut(1.0)?;
            StaticTriple::new(
                "adversarial-photon-inequality",
                Chart::euclidean(n),
                1.0 - 0.25 * s0.powf(k) * r.powf(-k),
                vec![BoundarySurface::sphere(format!("s={s0}"), n, s0)],
                (1.02 * s0, 10.0 * s0),
            )
        }
        "expression" => {
            let e = spec
                .expression
                .as_ref()
                .ok_or_else(|| GeoError::Config("fixture \"expression\" needs a [triple.expression] table".into()))?;
            build_expression(e)
        }
        other => Err(GeoError::Config(format!(
            "unknown fixture '{other}'; expected one of {}",
            FIXTURES.join(", ")
        ))),
    };
    triple.map_err(config_err)
}

fn build_expression(e: &ExpressionSpec) -> Result<StaticTriple> {
    let dim = e.coordinates.len();
    let mut ctx = ParseContext::new(&e.coordinates);
    for (name, value) in &e.constants {
        ctx = ctx.with_constant(name, *value);
    }
    let parse = |src: &str| parse_expr(src, &ctx);
    let rows = e
        .components
        .iter()
        .map(|row| row.iter().map(|c| parse(c)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let mut domain = Domain::unbounded(dim);
    if let Some(bounds) = &e.bounds {
        if bounds.len() != dim {
            return Err(GeoError::Config(format!("bounds has {} entries for {dim} coordinates", bounds.len())));
        }
        for (slot, (lo, hi)) in domain.bounds.iter_mut().zip(bounds) {
            *slot = (lo.unwrap_or(f64::NEG_INFINITY), hi.unwrap_or(f64::INFINITY));
        }
    }
    if let Some((lo, hi)) = e.radial {
        let hi = hi.unwrap_or(f64::INFINITY);
        match e.layout {
            Layout::Cartesian => domain = domain.with_radial(lo, hi),
            Layout::Polar => domain.bounds[0] = (lo, hi),
        }
    }
    let chart = Chart::new("expression", e.coordinates.clone(), rows, domain, e.layout)?;
    let lapse = parse(&e.lapse)?;
    let boundaries = e
        .boundaries
        .iter()
        .enumerate()
        .map(|(i, b)| match b {
            BoundarySpec::Sphere { label, radius, center } => BoundarySurface::new(
                label.clone().unwrap_or_else(|| format!("boundary-{i}")),
                Embedding::Sphere {
                    center: center.clone().unwrap_or_else(|| vec![0.0; dim]),
                    radius: *radius,
                },
            ),
            BoundarySpec::Level { label, coord, value } => BoundarySurface::new(
                label.clone().unwrap_or_else(|| format!("boundary-{i}")),
                Embedding::CoordinateLevel {
                    coord: *coord,
                    value: *value,
                    param_box: None,
                },
            ),
        })
        .collect();
    StaticTriple::new("expression", chart, lapse, boundaries, e.sample_shell)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip_through_toml() {
        let cfg = RunConfig::default();
        let text = toml::to_string(&cfg).unwrap();
        assert_eq!(RunConfig::from_str_any(&text).unwrap(), cfg);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(RunConfig::from_str_any("sed = 3").is_err());
        assert!(RunConfig::from_str_any("[triple]\nfixtur = \"flat\"").is_err());
        assert!(RunConfig::from_str_any(r#"{"triple": {"n": 4, "bogus": 1}}"#).is_err());
        assert!(RunConfig::from_str_any("[rigidity.classify]\numbilic = 1e-6\nzeroo = 1").is_err());
    }

    #[test]
    fn json_and_toml_agree() {
        let a = RunConfig::from_str_any("seed = 7\n[triple]\nn = 4\nm = 0.5\ncut = \"horizon\"").unwrap();
        let b = RunConfig::from_str_any(r#"{"seed": 7, "triple": {"n": 4, "m": 0.5, "cut": "horizon"}}"#).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.build_triple().unwrap().boundaries.len(), 1);
    }

    #[test]
    fn expression_triple_matches_fixture() {
        let text = r#"
[triple]
fixture = "expression"
[triple.expression]
coordinates = ["x", "y", "z"]
layout = "cartesian"
components = [["(1 + m/(2*sqrt(x^2+y^2+z^2)))^4", "0", "0"], ["(1 + m/(2*sqrt(x^2+y^2+z^2)))^4", "0"], ["(1 + m/(2*sqrt(x^2+y^2+z^2)))^4"]]
lapse = "(1 - m/(2*sqrt(x^2+y^2+z^2)))/(1 + m/(2*sqrt(x^2+y^2+z^2)))"
constants = { m = 1.0 }
radial = [0.0, 1e300]
sample_shell = [0.51, 5.0]
boundaries = [{ kind = "sphere", label = "horizon", radius = 0.5 }]
"#;
        let t = RunConfig::from_str_any(text).unwrap().build_triple().unwrap();
        let f = SchwarzschildModel::new(3, 1.0).unwrap().isotropic_triple(None).unwrap();
        let x = [0.7, -0.3, 1.1];
        assert!((t.lapse_at(&x) - f.lapse_at(&x)).abs() < 1e-15);
        assert_eq!(t.boundaries[0].label, "horizon");
    }

    #[test]
    fn bad_fixture_inputs_are_config_errors() {
        let mut spec = TripleSpec {
            fixture: "nope".into(),
            ..TripleSpec::default()
        };
        assert!(matches!(build_triple(&spec), Err(GeoError::Config(_))));
        spec.fixture = "schwarzschild-areal".into();
        spec.cut = Some("horizon".into());
        assert!(matches!(build_triple(&spec), Err(GeoError::Config(_))));
        spec.cut = Some("r=1".into());
        assert!(matches!(build_triple(&spec), Err(GeoError::Config(_))));
    }
}
