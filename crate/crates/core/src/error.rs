use thiserror::Error;

/// Errors raised by the geometry, diagram, solver and surface layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point is not on the future sheet of the hyperboloid: {0}")]
    InvalidPoint(String),
    #[error("point outside the domain: {0}")]
    OutOfDomain(String),
    #[error("point too far from the apex (distance {0:.3} > 20)")]
    Range(f64),
    #[error("degenerate geometry: {0}")]
    Degenerate(String),
    #[error("circles do not intersect transversally")]
    NoIntersection,
    #[error("need at least 3 sites, got {0}")]
    TooFewSites(usize),
    #[error("sites {0} and {1} coincide")]
    DuplicateSite(usize, usize),
    #[error("invalid target measure: {0}")]
    InvalidTarget(String),
    #[error("inadmissible height vector: cell {0} is empty")]
    Inadmissible(usize),
    #[error("singular system: {0}")]
    Singular(String),
    #[error("invalid metric mesh: {0}")]
    Metric(String),
    #[error("embedding drift {0:.3e} exceeds 1e-5")]
    EmbeddingDrift(f64),
    #[error("side pairing failed: {0}")]
    Pairing(String),
    #[error("tiling of depth {0} does not contain the fundamental domain")]
    InsufficientTiling(usize),
    #[error("point is outside every tile of the patch")]
    OutOfPatch,
    #[error("solver did not converge in {iterations} iterations (residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("line search stalled at iteration {iteration} (step below 1e-12)")]
    Stall { iteration: usize },
    #[error("{0}")]
    Input(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
