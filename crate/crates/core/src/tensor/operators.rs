//! Covariant differential operators on scalar, vector and tensor fields.

use super::chart::Metric;
use super::curvature::{christoffel, Christoffel, MetricJet};
use super::fields::{value_and_gradient, value_and_jacobian, ScalarField, SymTensorField, VectorField};
use crate::autodiff::{seed, Scalar};
use crate::error::Result;
use crate::linalg::Mat;

/// Value, coordinate gradient and coordinate Hessian `∂_i∂_j f`.
pub fn scalar_jet<F: ScalarField + ?Sized, S: Scalar>(f: &F, x: &[S]) -> (S, Vec<S>, Mat<S>) {
    let n = x.len();
    let mut value = S::zero();
    let mut grad = vec![S::zero(); n];
    let mut second = Mat::zeros(n);
    for j in 0..n {
        let (v, g) = value_and_gradient(f, &seed(x, j));
        value = v.re;
        for i in 0..n {
            grad[i] = g[i].re;
            second[(i, j)] = g[i].eps;
        }
    }
    (value, grad, second)
}

fn covariant_hessian<S: Scalar>(
    gamma: &Christoffel<S>,
    grad: &[S],
    second: &Mat<S>,
) -> Mat<S> {
    let n = grad.len();
    Mat::from_fn(n, |i, j| {
        let mut v = second[(i, j)];
        for (k, &dk) in grad.iter().enumerate() {
            v -= gamma.get(k, i, j) * dk;
        }
        v
    })
}

/// `∇²f = ∂²f − Γ·∂f`.
pub fn hessian_generic<M: Metric, F: ScalarField + ?Sized, S: Scalar>(
    metric: &M,
    f: &F,
    x: &[S],
) -> Result<Mat<S>> {
    let (_, gamma) = christoffel(metric, x)?;
    let (_, grad, second) = scalar_jet(f, x);
    Ok(covariant_hessian(&gamma, &grad, &second))
}

pub fn hessian<M: Metric, F: ScalarField + ?Sized>(metric: &M, f: &F, x: &[f64]) -> Result<Mat<f64>> {
    metric.validate_point(x)?;
    hessian_generic(metric, f, x)
}

pub fn laplacian_generic<M: Metric, F: ScalarField + ?Sized, S: Scalar>(
    metric: &M,
    f: &F,
    x: &[S],
) -> Result<S> {
    let (jet, gamma) = christoffel(metric, x)?;
    let (_, grad, second) = scalar_jet(f, x);
    let h = covariant_hessian(&gamma, &grad, &second);
    Ok(super::curvature::contract(&jet.ginv, &h))
}

pub fn laplacian<M: Metric, F: ScalarField + ?Sized>(metric: &M, f: &F, x: &[f64]) -> Result<f64> {
    metric.validate_point(x)?;
    laplacian_generic(metric, f, x)
}

/// `g^{ij} ∂_j f`.
pub fn raised_gradient<S: Scalar>(ginv: &Mat<S>, grad: &[S]) -> Vec<S> {
    ginv.mul_vec(grad)
}

/// `(L_X g)_ij = X^k ∂_k g_ij + g_kj ∂_i X^k + g_ik ∂_j X^k`.
pub fn lie_derivative_generic<M: Metric, X: VectorField + ?Sized, S: Scalar>(
    metric: &M,
    field: &X,
    x: &[S],
) -> Result<(MetricJet<S>, Mat<S>)> {
    let (jet, _) = christoffel(metric, x)?;
    let (v, jac) = value_and_jacobian(field, x);
    let n = x.len();
    let lie = Mat::from_fn(n, |i, j| {
        let mut acc = S::zero();
        for k in 0..n {
            acc += v[k] * jet.dg[k][(i, j)] + jet.g[(k, j)] * jac[k][i] + jet.g[(i, k)] * jac[k][j];
        }
        acc
    });
    Ok((jet, lie))
}

/// Trace-free part `T − (tr_g T / n) g`.
pub fn trace_free<S: Scalar>(t: &Mat<S>, g: &Mat<S>, ginv: &Mat<S>) -> Mat<S> {
    let n = g.dim();
    let tr = super::curvature::contract(ginv, t).scale(1.0 / n as f64);
    Mat::from_fn(n, |i, j| t[(i, j)] - tr * g[(i, j)])
}

/// Lie derivative of the metric and its trace-free part.
#[derive(Debug, Clone)]
pub struct LieDerivative {
    pub full: Mat<f64>,
    pub trace_free: Mat<f64>,
}

pub fn lie_derivative_metric<M: Metric, X: VectorField + ?Sized>(
    metric: &M,
    field: &X,
    x: &[f64],
) -> Result<LieDerivative> {
    metric.validate_point(x)?;
    let (jet, full) = lie_derivative_generic(metric, field, x)?;
    let tf = trace_free(&full, &jet.g, &jet.ginv);
    Ok(LieDerivative { full, trace_free: tf })
}

/// `div X = ∂_i X^i + Γ^i_ik X^k`.
pub fn divergence_generic<M: Metric, X: VectorField + ?Sized, S: Scalar>(
    metric: &M,
    field: &X,
    x: &[S],
) -> Result<S> {
    let (_, gamma) = christoffel(metric, x)?;
    let (v, jac) = value_and_jacobian(field, x);
    let n = x.len();
    let mut acc = S::zero();
    for i in 0..n {
        acc += jac[i][i];
        for k in 0..n {
            acc += gamma.get(i, i, k) * v[k];
        }
    }
    Ok(acc)
}

pub fn divergence<M: Metric, X: VectorField + ?Sized>(metric: &M, field: &X, x: &[f64]) -> Result<f64> {
    metric.validate_point(x)?;
    divergence_generic(metric, field, x)
}

/// `(div T)_j = g^{ik} ∇_k T_ij` for a symmetric covariant 2-tensor.
pub fn tensor_divergence_generic<M: Metric, T: SymTensorField + ?Sized, S: Scalar>(
    metric: &M,
    field: &T,
    x: &[S],
) -> Result<Vec<S>> {
    let (jet, gamma) = christoffel(metric, x)?;
    let n = x.len();
    let mut t = Mat::zeros(n);
    let mut dt = Vec::with_capacity(n);
    for k in 0..n {
        let tk = field.eval(&seed(x, k));
        t = tk.map(|v| v.re);
        dt.push(tk.map(|v| v.eps));
    }
    let out = (0..n)
        .map(|j| {
            let mut acc = S::zero();
            for i in 0..n {
                for k in 0..n {
                    let mut nabla = dt[k][(i, j)];
                    for l in 0..n {
                        nabla -= gamma.get(l, k, i) * t[(l, j)] + gamma.get(l, k, j) * t[(i, l)];
                    }
                    acc += jet.ginv[(i, k)] * nabla;
                }
            }
            acc
        })
        .collect();
    Ok(out)
}

pub fn tensor_divergence<M: Metric, T: SymTensorField + ?Sized>(
    metric: &M,
    field: &T,
    x: &[f64],
) -> Result<Vec<f64>> {
    metric.validate_point(x)?;
    tensor_divergence_generic(metric, field, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{euclidean_radius, Expr};
    use crate::tensor::chart::Chart;
    use crate::tensor::fields::ExprVector;

    #[test]
    fn hessian_of_radius_squared_is_twice_identity() {
        let f = euclidean_radius(3).powf(2.0);
        let h = hessian(&Chart::euclidean(3), &f, &[0.3, 1.0, -0.4]).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { 2.0 } else { 0.0 };
                assert!((h[(i, j)] - expected).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn laplacians_on_flat_space() {
        let delta = Chart::euclidean(3);
        let inv_r = 1.0 / euclidean_radius(3);
        assert!(laplacian(&delta, &inv_r, &[2.0, 0.0, 0.0]).unwrap().abs() < 1e-15);
        let r2 = euclidean_radius(3).powf(2.0);
        assert!((laplacian(&delta, &r2, &[0.1, 0.2, 0.3]).unwrap() - 6.0).abs() < 1e-14);
    }

    #[test]
    fn polar_laplacian_of_linear_function() {
        // x1 = r cos θ1 is harmonic.
        let f = Expr::var(0) * Expr::var(1).cos();
        let lap = laplacian(&Chart::euclidean_polar(3), &f, &[1.7, 0.9, 0.2]).unwrap();
        assert!(lap.abs() < 1e-14);
    }

    #[test]
    fn euler_field_is_conformal_killing() {
        let lie = lie_derivative_metric(&Chart::euclidean(3), &ExprVector::euler(3), &[0.5, 1.0, 2.0])
            .unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((lie.full[(i, j)] - if i == j { 2.0 } else { 0.0 }).abs() < 1e-15);
                assert!(lie.trace_free[(i, j)].abs() < 1e-15);
            }
        }
        let div = divergence(&Chart::euclidean(3), &ExprVector::euler(3), &[0.5, 1.0, 2.0]).unwrap();
        assert!((div - 3.0).abs() < 1e-15);
    }

    #[test]
    fn translation_is_killing() {
        let lie = lie_derivative_metric(
            &Chart::euclidean(3),
            &ExprVector::constant(&[1.0, -2.0, 0.5]),
            &[0.5, 1.0, 2.0],
        )
        .unwrap();
        assert_eq!(lie.full.max_abs(), 0.0);
        let div = divergence(&Chart::euclidean(3), &ExprVector::constant(&[1.0, 2.0, 3.0]), &[0.1, 0.2, 0.3])
            .unwrap();
        assert_eq!(div, 0.0);
    }

    #[test]
    fn polar_divergence_of_radial_field() {
        // r ∂_r in polar coordinates has divergence n.
        let field = ExprVector(vec![Expr::var(0), Expr::zero(), Expr::zero(), Expr::zero()]);
        let div = divergence(&Chart::euclidean_polar(4), &field, &[1.3, 0.5, 2.0, 0.1]).unwrap();
        assert!((div - 4.0).abs() < 1e-13);
    }
}
