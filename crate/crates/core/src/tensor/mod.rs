//! Tensor calculus in coordinate charts.

pub mod chart;
pub mod curvature;
pub mod fields;
pub mod finite_diff;
pub mod operators;

pub use chart::{Chart, Domain, Layout, Metric, Pullback};
pub use curvature::{curvature_at, geometry, CurvatureAtPoint, Geometry};
pub use fields::{ExprVector, ScalarField, SymTensorField, VectorField};
pub use operators::{
    divergence, hessian, laplacian, lie_derivative_metric, tensor_divergence, trace_free,
    LieDerivative,
};
