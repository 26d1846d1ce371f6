use thiserror::Error;

/// Failure modes shared by every module of the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported manifold: {0}")]
    UnsupportedManifold(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("flow blow-up: trajectory norm {norm:e} exceeded bound {bound:e} at t = {time}")]
    FlowBlowup { norm: f64, bound: f64, time: f64 },
    #[error("observable does not preserve the polarization: {0}")]
    PolarizationNotPreserved(String),
    #[error("operator is not hermitian on its interior block (defect {0:e})")]
    NonHermitian(f64),
    #[error("quadrature did not converge (estimate {estimate:e} above {threshold:e})")]
    QuadratureNonconvergence { estimate: f64, threshold: f64 },
    #[error("tail mass {mass:e} at truncation exceeds {limit:e}")]
    TailMass { mass: f64, limit: f64 },
    #[error("J1 + J2 is singular (|det| = {0:e})")]
    SingularSum(f64),
    #[error("ill-conditioned fit (residual {0:e})")]
    IllConditionedFit(f64),
    #[error("finite-difference stencil leaves the model domain at ({x}, {y})")]
    StencilOutOfDomain { x: f64, y: f64 },
    #[error("loop is not closed (first and last vertex differ by {0:e})")]
    OpenLoop(f64),
    #[error("lattice generators are not R-linearly independent")]
    DegenerateLattice,
}

pub type Result<T> = std::result::Result<T, Error>;
