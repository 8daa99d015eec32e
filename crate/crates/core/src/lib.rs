//! Numerical geometry of static vacuum triples `(M, g, N)`.
//!
//! The crate evaluates curvature of closed-form metrics with forward-mode
//! automatic differentiation, builds the conformal metrics
//! `g± = ((1 ± N)/2)^{4/(n−2)} g`, measures inner boundary components,
//! computes masses, and runs a hypothesis-by-hypothesis rigidity check that
//! certifies when a triple is a piece of the Schwarzschild manifold.
//!
//! Start with [`schwarzschild`] for fixtures, [`tensor`] for curvature, and
//! [`rigidity`] for the end-to-end check.

pub mod autodiff;
pub mod boundary;
pub mod cli;
pub mod config;
pub mod conformal;
pub mod error;
pub mod expr;
pub mod identities;
pub mod linalg;
pub mod report;
pub mod rigidity;
pub mod mass;
pub mod sampling;
pub mod schwarzschild;
pub mod spectral;
pub mod tensor;
pub mod triple;

pub use error::{GeoError, Result};
