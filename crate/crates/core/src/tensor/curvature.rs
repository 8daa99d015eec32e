//! Levi-Civita connection and curvature from metric components.
//!
//! Conventions: `Γ^k_ij = ½ g^kl (∂_i g_jl + ∂_j g_il − ∂_l g_ij)`,
//! `R^l_ijk = ∂_j Γ^l_ki − ∂_k Γ^l_ji + Γ^l_jm Γ^m_ki − Γ^l_km Γ^m_ji`,
//! `Ric_ik = R^l_ilk`. Round spheres have positive scalar curvature.

use serde::Serialize;

use super::chart::Metric;
use crate::autodiff::{seed, Dual, Scalar};
use crate::error::Result;
use crate::linalg::Mat;

/// Metric, inverse metric and first coordinate derivatives at a point.
#[derive(Debug, Clone)]
pub struct MetricJet<S> {
    pub g: Mat<S>,
    pub ginv: Mat<S>,
    /// `dg[k] = ∂_k g`.
    pub dg: Vec<Mat<S>>,
}

pub fn metric_jet<M: Metric, S: Scalar>(metric: &M, x: &[S]) -> Result<MetricJet<S>> {
    let n = metric.dim();
    let mut dg = Vec::with_capacity(n);
    let mut g = Mat::zeros(n);
    for k in 0..n {
        let gk = metric.components(&seed(x, k));
        g = gk.map(|v| v.re);
        dg.push(gk.map(|v| v.eps));
    }
    let ginv = g.inverse()?;
    Ok(MetricJet { g, ginv, dg })
}

/// `Γ^k_ij` stored with the upper index first.
#[derive(Debug, Clone)]
pub struct Christoffel<S> {
    n: usize,
    data: Vec<S>,
}

impl<S: Scalar> Christoffel<S> {
    pub fn get(&self, k: usize, i: usize, j: usize) -> S {
        self.data[(k * self.n + i) * self.n + j]
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn re(&self) -> Christoffel<f64> {
        Christoffel {
            n: self.n,
            data: self.data.iter().map(Scalar::re).collect(),
        }
    }

    pub fn as_slice(&self) -> &[S] {
        &self.data
    }
}

pub fn christoffel_from_jet<S: Scalar>(jet: &MetricJet<S>) -> Christoffel<S> {
    let n = jet.g.dim();
    // Lowered symbols Γ_lij = ½(∂_i g_jl + ∂_j g_il − ∂_l g_ij).
    let mut lower = vec![S::zero(); n * n * n];
    for l in 0..n {
        for i in 0..n {
            for j in i..n {
                let v = (jet.dg[i][(j, l)] + jet.dg[j][(i, l)] - jet.dg[l][(i, j)]).scale(0.5);
                lower[(l * n + i) * n + j] = v;
                lower[(l * n + j) * n + i] = v;
            }
        }
    }
    let mut data = vec![S::zero(); n * n * n];
    for k in 0..n {
        for i in 0..n {
            for j in i..n {
                let mut acc = S::zero();
                for l in 0..n {
                    acc += jet.ginv[(k, l)] * lower[(l * n + i) * n + j];
                }
                data[(k * n + i) * n + j] = acc;
                data[(k * n + j) * n + i] = acc;
            }
        }
    }
    Christoffel { n, data }
}

pub fn christoffel<M: Metric, S: Scalar>(
    metric: &M,
    x: &[S],
) -> Result<(MetricJet<S>, Christoffel<S>)> {
    let jet = metric_jet(metric, x)?;
    let gamma = christoffel_from_jet(&jet);
    Ok((jet, gamma))
}

/// `R^l_ijk` stored `[l][i][j][k]`.
#[derive(Debug, Clone)]
pub struct Riemann<S> {
    n: usize,
    data: Vec<S>,
}

impl<S: Scalar> Riemann<S> {
    pub fn get(&self, l: usize, i: usize, j: usize, k: usize) -> S {
        self.data[((l * self.n + i) * self.n + j) * self.n + k]
    }

    pub fn as_slice(&self) -> &[S] {
        &self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |a, v| a.max(v.re().abs()))
    }
}

/// Full curvature data at a point, generic over the scalar type so that it
/// can itself be differentiated.
#[derive(Debug, Clone)]
pub struct Geometry<S> {
    pub jet: MetricJet<S>,
    pub gamma: Christoffel<S>,
    /// `dgamma[j]` holds `∂_j Γ`.
    pub dgamma: Vec<Christoffel<S>>,
    pub riemann: Riemann<S>,
    pub ricci: Mat<S>,
    pub scalar: S,
}

pub fn geometry<M: Metric, S: Scalar>(metric: &M, x: &[S]) -> Result<Geometry<S>> {
    let n = metric.dim();
    let mut dgamma = Vec::with_capacity(n);
    let mut base: Option<(MetricJet<S>, Christoffel<S>)> = None;
    for j in 0..n {
        let xs: Vec<Dual<S>> = seed(x, j);
        let (jet_d, gamma_d) = christoffel(metric, &xs)?;
        if base.is_none() {
            let jet = MetricJet {
                g: jet_d.g.map(|v| v.re),
                ginv: jet_d.ginv.map(|v| v.re),
                dg: jet_d.dg.iter().map(|m| m.map(|v| v.re)).collect(),
            };
            let gamma = Christoffel {
                n,
                data: gamma_d.data.iter().map(|v| v.re).collect(),
            };
            base = Some((jet, gamma));
        }
        dgamma.push(Christoffel {
            n,
            data: gamma_d.data.iter().map(|v| v.eps).collect(),
        });
    }
    let (jet, gamma) = base.expect("dimension is at least one");
    let riemann = riemann_from(&gamma, &dgamma);
    let ricci = Mat::from_fn(n, |i, k| {
        (0..n).fold(S::zero(), |acc, l| acc + riemann.get(l, i, l, k))
    });
    let scalar = contract(&jet.ginv, &ricci);
    Ok(Geometry {
        jet,
        gamma,
        dgamma,
        riemann,
        ricci,
        scalar,
    })
}

fn riemann_from<S: Scalar>(gamma: &Christoffel<S>, dgamma: &[Christoffel<S>]) -> Riemann<S> {
    let n = gamma.n;
    let mut data = vec![S::zero(); n * n * n * n];
    for l in 0..n {
        for i in 0..n {
            for j in 0..n {
                for k in (j + 1)..n {
                    let mut v = dgamma[j].get(l, k, i) - dgamma[k].get(l, j, i);
                    for m in 0..n {
                        v += gamma.get(l, j, m) * gamma.get(m, k, i)
                            - gamma.get(l, k, m) * gamma.get(m, j, i);
                    }
                    data[((l * n + i) * n + j) * n + k] = v;
                    data[((l * n + i) * n + k) * n + j] = -v;
                }
            }
        }
    }
    Riemann { n, data }
}

/// Full contraction `A^{ij} B_ij` of an inverse metric with a covariant
/// 2-tensor.
pub fn contract<S: Scalar>(upper: &Mat<S>, lower: &Mat<S>) -> S {
    let n = upper.dim();
    let mut acc = S::zero();
    for i in 0..n {
        for j in 0..n {
            acc += upper[(i, j)] * lower[(i, j)];
        }
    }
    acc
}

/// `|T|²_g = g^{ik} g^{jl} T_ij T_kl` for a covariant 2-tensor.
pub fn norm_sq<S: Scalar>(ginv: &Mat<S>, t: &Mat<S>) -> S {
    let raised = ginv.mul(t).mul(ginv);
    contract(&raised, t)
}

/// Curvature quantities at an `f64` point, ready for reporting.
#[derive(Debug, Clone, Serialize)]
pub struct CurvatureAtPoint {
    pub point: Vec<f64>,
    pub christoffel: Vec<f64>,
    pub riemann: Vec<f64>,
    pub ricci: Vec<Vec<f64>>,
    pub scalar: f64,
    #[serde(skip)]
    pub metric: Mat<f64>,
    #[serde(skip)]
    pub inverse_metric: Mat<f64>,
    #[serde(skip)]
    n: usize,
}

impl CurvatureAtPoint {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn gamma(&self, k: usize, i: usize, j: usize) -> f64 {
        self.christoffel[(k * self.n + i) * self.n + j]
    }

    pub fn riem(&self, l: usize, i: usize, j: usize, k: usize) -> f64 {
        self.riemann[((l * self.n + i) * self.n + j) * self.n + k]
    }

    pub fn max_abs_riemann(&self) -> f64 {
        self.riemann.iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    /// Largest `|R^l_ijk + R^l_jki + R^l_kij|`.
    pub fn first_bianchi_defect(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let s = self.riem(l, i, j, k) + self.riem(l, j, k, i) + self.riem(l, k, i, j);
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }

    /// `|Ric|²_g`.
    pub fn ricci_norm_sq(&self) -> f64 {
        let ric = Mat::from_fn(self.n, |i, j| self.ricci[i][j]);
        norm_sq(&self.inverse_metric, &ric)
    }

    /// `|Riem|²_g = R_lijk R^lijk`.
    pub fn riemann_norm_sq(&self) -> f64 {
        let n = self.n;
        let g = &self.metric;
        let ginv = &self.inverse_metric;
        // Fully covariant R_pijk = g_pl R^l_ijk.
        let mut low = vec![0.0; n * n * n * n];
        for p in 0..n {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        low[((p * n + i) * n + j) * n + k] =
                            (0..n).map(|l| g[(p, l)] * self.riem(l, i, j, k)).sum();
                    }
                }
            }
        }
        // Raise all four indices one at a time.
        let mut up = low.clone();
        for slot in 0..4 {
            let mut next = vec![0.0; up.len()];
            for idx in 0..up.len() {
                let mut digits = [idx / (n * n * n), (idx / (n * n)) % n, (idx / n) % n, idx % n];
                let target = digits[slot];
                let mut acc = 0.0;
                for q in 0..n {
                    digits[slot] = q;
                    let src = ((digits[0] * n + digits[1]) * n + digits[2]) * n + digits[3];
                    acc += ginv[(target, q)] * up[src];
                }
                next[idx] = acc;
            }
            up = next;
        }
        low.iter().zip(&up).map(|(a, b)| a * b).sum()
    }
}

/// Christoffel symbols, Riemann and Ricci tensors and scalar curvature at an
/// interior point.
pub fn curvature_at<M: Metric>(metric: &M, x: &[f64]) -> Result<CurvatureAtPoint> {
    metric.validate_point(x)?;
    let geo = geometry(metric, x)?;
    let n = metric.dim();
    Ok(CurvatureAtPoint {
        point: x.to_vec(),
        christoffel: geo.gamma.data.clone(),
        riemann: geo.riemann.data.clone(),
        ricci: geo.ricci.rows(),
        scalar: geo.scalar,
        metric: geo.jet.g,
        inverse_metric: geo.jet.ginv,
        n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;
    use crate::tensor::chart::{Chart, Domain, Layout};

    fn sphere_chart(radius: f64) -> Chart {
        Chart::diagonal(
            "round-sphere",
            vec!["theta".into(), "phi".into()],
            vec![
                Expr::constant(radius * radius),
                Expr::constant(radius * radius) * Expr::var(0).sin().powf(2.0),
            ],
            Domain {
                bounds: vec![(0.0, std::f64::consts::PI), (f64::NEG_INFINITY, f64::INFINITY)],
                radial: None,
            },
            Layout::Polar,
        )
        .unwrap()
    }

    #[test]
    fn flat_metric_has_no_curvature() {
        let c = curvature_at(&Chart::euclidean(3), &[0.3, -1.0, 2.0]).unwrap();
        assert_eq!(c.max_abs_riemann(), 0.0);
        assert_eq!(c.scalar, 0.0);
    }

    #[test]
    fn round_sphere_scalar_curvature() {
        let c = curvature_at(&sphere_chart(3.0), &[1.1, 0.4]).unwrap();
        assert!((c.scalar - 2.0 / 9.0).abs() < 1e-13);
        assert!(c.first_bianchi_defect() < 1e-13);
        // Γ^θ_φφ = −sin θ cos θ
        assert!((c.gamma(0, 1, 1) + 1.1_f64.sin() * 1.1_f64.cos()).abs() < 1e-14);
    }

    #[test]
    fn polar_flat_metric_is_flat() {
        let c = curvature_at(&Chart::euclidean_polar(4), &[2.0, 0.8, 1.9, 0.3]).unwrap();
        assert!(c.max_abs_riemann() < 1e-13);
    }

    #[test]
    fn outside_domain_is_an_error() {
        assert!(curvature_at(&sphere_chart(1.0), &[0.0, 1.0]).is_err());
    }
}
