//! Scalar, vector and symmetric-tensor fields that can be evaluated at any
//! [`Scalar`] type.

use crate::autodiff::{seed, Scalar};
use crate::expr::Expr;
use crate::linalg::Mat;

pub trait ScalarField: Sync {
    fn eval<S: Scalar>(&self, x: &[S]) -> S;
}

/// Contravariant vector field.
pub trait VectorField: Sync {
    fn eval<S: Scalar>(&self, x: &[S]) -> Vec<S>;
}

/// Covariant symmetric 2-tensor field.
pub trait SymTensorField: Sync {
    fn eval<S: Scalar>(&self, x: &[S]) -> Mat<S>;
}

impl ScalarField for Expr {
    fn eval<S: Scalar>(&self, x: &[S]) -> S {
        Expr::eval(self, x)
    }
}

impl<F: ScalarField> ScalarField for &F {
    fn eval<S: Scalar>(&self, x: &[S]) -> S {
        (**self).eval(x)
    }
}

impl<F: VectorField> VectorField for &F {
    fn eval<S: Scalar>(&self, x: &[S]) -> Vec<S> {
        (**self).eval(x)
    }
}

/// Vector field with closed-form components.
#[derive(Debug, Clone)]
pub struct ExprVector(pub Vec<Expr>);

impl VectorField for ExprVector {
    fn eval<S: Scalar>(&self, x: &[S]) -> Vec<S> {
        self.0.iter().map(|e| e.eval(x)).collect()
    }
}

impl ExprVector {
    pub fn constant(values: &[f64]) -> Self {
        Self(values.iter().map(|&v| Expr::constant(v)).collect())
    }

    /// Euler field `x^i ∂_i`.
    pub fn euler(n: usize) -> Self {
        Self((0..n).map(Expr::var).collect())
    }
}

/// Constant scalar field.
#[derive(Debug, Clone, Copy)]
pub struct ConstantField(pub f64);

impl ScalarField for ConstantField {
    fn eval<S: Scalar>(&self, _x: &[S]) -> S {
        S::from_f64(self.0)
    }
}

/// Value and coordinate gradient of a scalar field.
pub fn value_and_gradient<F: ScalarField + ?Sized, S: Scalar>(f: &F, x: &[S]) -> (S, Vec<S>) {
    let n = x.len();
    let mut value = S::zero();
    let mut grad = vec![S::zero(); n];
    for (k, slot) in grad.iter_mut().enumerate() {
        let v = f.eval(&seed(x, k));
        value = v.re;
        *slot = v.eps;
    }
    if n == 0 {
        value = f.eval(x);
    }
    (value, grad)
}

/// Value and Jacobian `∂_k X^i` (stored `[i][k]`) of a vector field.
pub fn value_and_jacobian<X: VectorField + ?Sized, S: Scalar>(
    field: &X,
    x: &[S],
) -> (Vec<S>, Vec<Vec<S>>) {
    let n = x.len();
    let mut value = Vec::new();
    let mut jac = vec![vec![S::zero(); n]; n];
    for k in 0..n {
        let v = field.eval(&seed(x, k));
        value = v.iter().map(|c| c.re).collect();
        for (i, c) in v.iter().enumerate() {
            jac[i][k] = c.eps;
        }
    }
    (value, jac)
}
