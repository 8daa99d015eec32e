//! Small dense square matrices over any [`Scalar`].
//!
//! The matrices here are at most 5×5 (metric components), so a plain
//! row-major `Vec` with Gauss-Jordan elimination is all that is needed. The
//! generic element type lets inverses and determinants carry derivatives.

use std::ops::{Index, IndexMut};

use crate::autodiff::Scalar;
use crate::error::GeoError;

#[derive(Clone, Debug, PartialEq)]
pub struct Mat<S> {
    n: usize,
    data: Vec<S>,
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![S::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(S) -> T) -> Mat<T> {
        Mat {
            n: self.n,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scaled(&self, factor: S) -> Self {
        self.map(|v| v * factor)
    }

    pub fn re(&self) -> Mat<f64> {
        self.map(|v| v.re())
    }

    pub fn trace(&self) -> S {
        (0..self.n).fold(S::zero(), |acc, i| acc + self[(i, i)])
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_fn(self.n, |i, j| {
            (0..self.n).fold(S::zero(), |acc, k| acc + self[(i, k)] * other[(k, j)])
        })
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        (0..self.n)
            .map(|i| (0..self.n).fold(S::zero(), |acc, k| acc + self[(i, k)] * v[k]))
            .collect()
    }

    /// Bilinear form `uᵀ M v`.
    pub fn form(&self, u: &[S], v: &[S]) -> S {
        let mv = self.mul_vec(v);
        u.iter().zip(&mv).fold(S::zero(), |acc, (&a, &b)| acc + a * b)
    }

    /// Inverse and determinant by Gauss-Jordan with partial pivoting on the
    /// real parts.
    pub fn inverse_and_det(&self) -> Result<(Self, S), GeoError> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let mut det = S::one();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| {
                    a[(i, col)]
                        .re()
                        .abs()
                        .total_cmp(&a[(j, col)].re().abs())
                })
                .unwrap();
            if a[(pivot, col)].re() == 0.0 || !a[(pivot, col)].re().is_finite() {
                return Err(GeoError::Singular);
            }
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
                det = -det;
            }
            let p = a[(col, col)];
            det *= p;
            let p_inv = p.recip();
            for j in 0..n {
                a[(col, j)] *= p_inv;
                inv[(col, j)] *= p_inv;
            }
            for i in 0..n {
                if i == col {
                    continue;
                }
                let factor = a[(i, col)];
                if factor.re() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let (ac, ic) = (a[(col, j)], inv[(col, j)]);
                    a[(i, j)] -= factor * ac;
                    inv[(i, j)] -= factor * ic;
                }
            }
        }
        Ok((inv, det))
    }

    pub fn inverse(&self) -> Result<Self, GeoError> {
        self.inverse_and_det().map(|(inv, _)| inv)
    }

    pub fn det(&self) -> S {
        self.inverse_and_det().map_or(S::zero(), |(_, d)| d)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.n {
            self.data.swap(a * self.n + j, b * self.n + j);
        }
    }
}

impl Mat<f64> {
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// Largest entry of `|M - Mᵀ|` relative to the largest entry of `|M|`.
    pub fn asymmetry(&self) -> f64 {
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..i {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst / scale
    }

    pub fn eigenvalues_symmetric(&self) -> Vec<f64> {
        let m = nalgebra::DMatrix::from_fn(self.n, self.n, |i, j| {
            0.5 * (self[(i, j)] + self[(j, i)])
        });
        let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| self.data[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }
}

impl<S> Index<(usize, usize)> for Mat<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.n + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Mat<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.n + j]
    }
}
