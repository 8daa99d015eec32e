use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeoError {
    #[error("point {0:?} is outside the chart domain")]
    PointOutsideDomain(Vec<f64>),
    #[error("metric is not positive definite (smallest eigenvalue {min_eigenvalue:e}) at {point:?}")]
    NotPositiveDefinite { point: Vec<f64>, min_eigenvalue: f64 },
    #[error("singular matrix")]
    Singular,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("lapse is not harmonic: |ΔN| = {residual:e}")]
    HarmonicityViolated { residual: f64 },
    #[error("conformal factor is not positive ({value:e}) at {point:?}")]
    NonPositiveFactor { point: Vec<f64>, value: f64 },
    #[error("degenerate surface: {0}")]
    DegenerateSurface(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("metric does not decay at infinity: {0}")]
    NonDecaying(String),
    #[error("grid too coarse: estimated error {estimate:e}")]
    GridTooCoarse { estimate: f64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, GeoError>;
