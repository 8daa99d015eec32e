//! Declared inner-boundary hypersurfaces.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{GeoError, Result};
use crate::expr::Expr;
use crate::tensor::chart::{unit_sphere_map, Layout};

/// Which side the unit normal points to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    TowardInfinity,
    TowardInterior,
}

#[derive(Debug, Clone)]
pub enum Embedding {
    /// Coordinate sphere `|x − center| = radius` in a Cartesian chart.
    Sphere { center: Vec<f64>, radius: f64 },
    /// Axis-aligned ellipsoid in a Cartesian chart.
    Ellipsoid { center: Vec<f64>, axes: Vec<f64> },
    /// Level set `{x^coord = value}`; the remaining coordinates are the
    /// parameters. For `r = const` in a polar chart the angular box is implied.
    CoordinateLevel {
        coord: usize,
        value: f64,
        param_box: Option<Vec<(f64, f64)>>,
    },
    /// Explicit parametrization `u ↦ x(u)` over a box.
    Map {
        exprs: Vec<Expr>,
        param_box: Vec<(f64, f64)>,
    },
}

#[derive(Debug, Clone)]
pub struct BoundarySurface {
    pub label: String,
    pub embedding: Embedding,
    pub orientation: Orientation,
    pub orders: Option<Vec<usize>>,
    /// Declared topology tag, e.g. `"sphere"`.
    pub topology: String,
}

/// Box `(0, π)^{n−2} × (0, 2π)` of hyperspherical angles.
pub fn angular_box(n: usize) -> Vec<(f64, f64)> {
    let mut b = vec![(0.0, PI); n - 2];
    b.push((0.0, 2.0 * PI));
    b
}

impl BoundarySurface {
    pub fn new(label: impl Into<String>, embedding: Embedding) -> Self {
        Self {
            label: label.into(),
            embedding,
            orientation: Orientation::TowardInfinity,
            orders: None,
            topology: "sphere".into(),
        }
    }

    pub fn sphere(label: impl Into<String>, n: usize, radius: f64) -> Self {
        Self::new(
            label,
            Embedding::Sphere {
                center: vec![0.0; n],
                radius,
            },
        )
    }

    /// `{r = value}` in a polar chart.
    pub fn radial_level(label: impl Into<String>, value: f64) -> Self {
        Self::new(
            label,
            Embedding::CoordinateLevel {
                coord: 0,
                value,
                param_box: None,
            },
        )
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    pub fn with_orders(mut self, orders: Vec<usize>) -> Self {
        self.orders = Some(orders);
        self
    }

    /// Reference point for deciding which way is "toward infinity" in a
    /// Cartesian chart.
    pub fn center(&self, n: usize) -> Vec<f64> {
        match &self.embedding {
            Embedding::Sphere { center, .. } | Embedding::Ellipsoid { center, .. } => center.clone(),
            _ => vec![0.0; n],
        }
    }

    /// Parametrization map (one expression per chart coordinate) and its
    /// parameter box.
    pub fn parametrization(&self, n: usize, layout: Layout) -> Result<(Vec<Expr>, Vec<(f64, f64)>)> {
        let check_len = |len: usize| {
            if len == n {
                Ok(())
            } else {
                Err(GeoError::DimensionMismatch { expected: n, got: len })
            }
        };
        match &self.embedding {
            Embedding::Sphere { center, radius } => {
                self.require_cartesian(layout)?;
                check_len(center.len())?;
                if !(*radius > 0.0) {
                    return Err(GeoError::InvalidParameter(format!(
                        "sphere radius must be positive, got {radius}"
                    )));
                }
                let map = unit_sphere_map(n - 1, 0)
                    .into_iter()
                    .zip(center)
                    .map(|(e, &c)| e * *radius + c)
                    .collect();
                Ok((map, angular_box(n)))
            }
            Embedding::Ellipsoid { center, axes } => {
                self.require_cartesian(layout)?;
                check_len(center.len())?;
                check_len(axes.len())?;
                if axes.iter().any(|&a| !(a > 0.0)) {
                    return Err(GeoError::InvalidParameter("ellipsoid axes must be positive".into()));
                }
                let map = unit_sphere_map(n - 1, 0)
                    .into_iter()
                    .zip(center.iter().zip(axes))
                    .map(|(e, (&c, &a))| e * a + c)
                    .collect();
                Ok((map, angular_box(n)))
            }
            Embedding::CoordinateLevel {
                coord,
                value,
                param_box,
            } => {
                if *coord >= n {
                    return Err(GeoError::InvalidParameter(format!(
                        "level coordinate {coord} out of range for dimension {n}"
                    )));
                }
                let bounds = match param_box {
                    Some(b) => b.clone(),
                    None if layout == Layout::Polar && *coord == 0 => angular_box(n),
                    None => {
                        return Err(GeoError::InvalidParameter(
                            "a parameter box is required for this level set".into(),
                        ))
                    }
                };
                if bounds.len() != n - 1 {
                    return Err(GeoError::DimensionMismatch {
                        expected: n - 1,
                        got: bounds.len(),
                    });
                }
                let mut next = 0;
                let map = (0..n)
                    .map(|k| {
                        if k == *coord {
                            Expr::constant(*value)
                        } else {
                            next += 1;
                            Expr::var(next - 1)
                        }
                    })
                    .collect();
                Ok((map, bounds))
            }
            Embedding::Map { exprs, param_box } => {
                check_len(exprs.len())?;
                if param_box.len() != n - 1 {
                    return Err(GeoError::DimensionMismatch {
                        expected: n - 1,
                        got: param_box.len(),
                    });
                }
                if let Some(max) = exprs.iter().filter_map(Expr::max_var).max() {
                    if max >= n - 1 {
                        return Err(GeoError::InvalidParameter(format!(
                            "surface map references parameter {max} but only {} exist",
                            n - 1
                        )));
                    }
                }
                Ok((exprs.clone(), param_box.clone()))
            }
        }
    }

    fn require_cartesian(&self, layout: Layout) -> Result<()> {
        if layout == Layout::Cartesian {
            Ok(())
        } else {
            Err(GeoError::InvalidParameter(format!(
                "surface '{}' is a Cartesian sphere but the chart is polar",
                self.label
            )))
        }
    }

    /// Coordinate radius when the surface is a round coordinate sphere about
    /// the origin (Cartesian) or an `r`-level (polar).
    pub fn coordinate_radius(&self) -> Option<f64> {
        match &self.embedding {
            Embedding::Sphere { center, radius } if center.iter().all(|&c| c == 0.0) => Some(*radius),
            Embedding::CoordinateLevel { coord: 0, value, .. } => Some(*value),
            _ => None,
        }
    }
}
