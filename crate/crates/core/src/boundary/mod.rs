//! Inner boundary components: measurement and classification.

pub mod classify;
pub mod measure;
pub mod quadrature;
pub mod surface;

pub use classify::{classify, gauss_bonnet_euler, BoundaryClassification, ClassifyTolerances};
pub use measure::{measure_boundary, measure_surface, BoundaryData, FieldStats, NodeSample};
pub use surface::{BoundarySurface, Embedding, Orientation};
