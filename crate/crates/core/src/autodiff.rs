//! Forward-mode automatic differentiation.
//!
//! Every geometric quantity in this crate is written once, generically over
//! [`Scalar`]. Evaluating it with [`Dual<S>`] instead of `S` yields a
//! directional derivative alongside the value; nesting duals gives second and
//! third derivatives that are exact to roundoff.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Real-like number type the geometry code is generic over.
pub trait Scalar:
    Copy
    + Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    fn from_f64(value: f64) -> Self;
    /// Innermost real value, discarding all infinitesimal parts.
    fn re(&self) -> f64;
    fn powi(self, exponent: i32) -> Self;
    fn powf(self, exponent: f64) -> Self;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn atan2(self, other: Self) -> Self;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn one() -> Self {
        Self::from_f64(1.0)
    }

    fn scale(self, factor: f64) -> Self {
        self * Self::from_f64(factor)
    }

    fn recip(self) -> Self {
        Self::one() / self
    }

    /// Power with a real exponent that routes integral exponents through
    /// `powi`, so negative bases stay well defined for `x^2` and friends.
    fn pow_real(self, exponent: f64) -> Self {
        if exponent.fract() == 0.0 && exponent.abs() < i32::MAX as f64 {
            self.powi(exponent as i32)
        } else {
            self.powf(exponent)
        }
    }
}

impl Scalar for f64 {
    fn from_f64(value: f64) -> Self {
        value
    }
    fn re(&self) -> f64 {
        *self
    }
    fn powi(self, exponent: i32) -> Self {
        f64::powi(self, exponent)
    }
    fn powf(self, exponent: f64) -> Self {
        f64::powf(self, exponent)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn atan2(self, other: Self) -> Self {
        f64::atan2(self, other)
    }
}

/// Dual number `re + eps·ε` with `ε² = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual<T> {
    pub re: T,
    pub eps: T,
}

impl<T: Scalar> Dual<T> {
    pub fn new(re: T, eps: T) -> Self {
        Self { re, eps }
    }

    pub fn constant(re: T) -> Self {
        Self { re, eps: T::zero() }
    }

    pub fn variable(re: T) -> Self {
        Self { re, eps: T::one() }
    }

    /// Applies a univariate function given its value and derivative at `re`.
    fn chain(self, value: T, derivative: T) -> Self {
        Self {
            re: value,
            eps: derivative * self.eps,
        }
    }
}

impl<T: Scalar> Add for Dual<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.eps + rhs.eps)
    }
}

impl<T: Scalar> Sub for Dual<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.eps - rhs.eps)
    }
}

impl<T: Scalar> Mul for Dual<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(self.re * rhs.re, self.re * rhs.eps + self.eps * rhs.re)
    }
}

impl<T: Scalar> Div for Dual<T> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let inv = rhs.re.recip();
        let re = self.re * inv;
        Self::new(re, (self.eps - re * rhs.eps) * inv)
    }
}

impl<T: Scalar> Neg for Dual<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.eps)
    }
}

impl<T: Scalar> AddAssign for Dual<T> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<T: Scalar> SubAssign for Dual<T> {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<T: Scalar> MulAssign for Dual<T> {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl<T: Scalar> Scalar for Dual<T> {
    fn from_f64(value: f64) -> Self {
        Self::constant(T::from_f64(value))
    }

    fn re(&self) -> f64 {
        self.re.re()
    }

    fn powi(self, exponent: i32) -> Self {
        if exponent == 0 {
            return Self::one();
        }
        let lower = self.re.powi(exponent - 1);
        self.chain(lower * self.re, lower.scale(exponent as f64))
    }

    fn powf(self, exponent: f64) -> Self {
        let lower = self.re.pow_real(exponent - 1.0);
        self.chain(lower * self.re, lower.scale(exponent))
    }

    fn sqrt(self) -> Self {
        let root = self.re.sqrt();
        self.chain(root, (root.scale(2.0)).recip())
    }

    fn exp(self) -> Self {
        let value = self.re.exp();
        self.chain(value, value)
    }

    fn ln(self) -> Self {
        self.chain(self.re.ln(), self.re.recip())
    }

    fn sin(self) -> Self {
        self.chain(self.re.sin(), self.re.cos())
    }

    fn cos(self) -> Self {
        self.chain(self.re.cos(), -self.re.sin())
    }

    fn atan2(self, other: Self) -> Self {
        // d atan2(y, x) = (x dy - y dx) / (x² + y²)
        let denom = self.re * self.re + other.re * other.re;
        Self::new(
            self.re.atan2(other.re),
            (other.re * self.eps - self.re * other.eps) / denom,
        )
    }
}

/// Lifts a point to dual numbers with zero infinitesimal part.
pub fn lift<S: Scalar>(x: &[S]) -> Vec<Dual<S>> {
    x.iter().map(|&v| Dual::constant(v)).collect()
}

/// Lifts a point to dual numbers seeded along coordinate direction `dir`.
pub fn seed<S: Scalar>(x: &[S], dir: usize) -> Vec<Dual<S>> {
    x.iter()
        .enumerate()
        .map(|(i, &v)| {
            if i == dir {
                Dual::variable(v)
            } else {
                Dual::constant(v)
            }
        })
        .collect()
}

/// Value and gradient of `f` at `x`, one seeded evaluation per direction.
pub fn gradient<S, F>(x: &[S], f: F) -> (S, Vec<S>)
where
    S: Scalar,
    F: Fn(&[Dual<S>]) -> Dual<S>,
{
    let mut value = S::zero();
    let grad = (0..x.len())
        .map(|dir| {
            let out = f(&seed(x, dir));
            value = out.re;
            out.eps
        })
        .collect();
    if x.is_empty() {
        value = f(&lift(x)).re;
    }
    (value, grad)
}

/// Value, gradient and Hessian of `f` at an `f64` point via nested duals.
pub fn hessian<F>(x: &[f64], f: F) -> (f64, Vec<f64>, Vec<Vec<f64>>)
where
    F: Fn(&[Dual<Dual<f64>>]) -> Dual<Dual<f64>>,
{
    let n = x.len();
    let mut value = 0.0;
    let mut grad = vec![0.0; n];
    let mut hess = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let inner: Vec<Dual<f64>> = seed(x, j);
            let point: Vec<Dual<Dual<f64>>> = inner
                .iter()
                .enumerate()
                .map(|(k, &v)| {
                    Dual::new(v, if k == i { Dual::one() } else { Dual::zero() })
                })
                .collect();
            let out = f(&point);
            value = out.re.re;
            grad[j] = out.re.eps;
            grad[i] = out.eps.re;
            hess[i][j] = out.eps.eps;
            hess[j][i] = out.eps.eps;
        }
    }
    (value, grad, hess)
}
