use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain parameter must be positive: {0}")]
    NonPositiveParameter(&'static str),

    #[error("hole radius {delta} must satisfy 0 < delta < {max} for this punched box")]
    InvalidHoleRadius { delta: f64, max: f64 },

    #[error("empty discretization: no interior nodes at h = {h}")]
    EmptyDiscretization { h: f64 },

    #[error("field does not belong to this grid")]
    GridMismatch,

    #[error("conjugate gradient stalled after {iterations} iterations (residual {residual:.3e}, target {target:.3e})")]
    CgStalled {
        iterations: usize,
        residual: f64,
        target: f64,
    },

    #[error("eigenvalue iteration did not converge after {iterations} sweeps (residual {residual:.3e})")]
    EigenStalled { iterations: usize, residual: f64 },

    #[error("hole unresolved: no lattice node falls inside the hole (h = {h}, delta = {delta}); refine h below delta/2")]
    HoleUnresolved { h: f64, delta: f64 },

    #[error("domain is not convex")]
    NonConvex,

    #[error("width metrics are only defined for planar domains")]
    NotPlanar,

    #[error("walk exceeded the jump cap of {0}")]
    WalkJumpCap(u64),

    #[error("start point must lie strictly inside the domain")]
    StartOutside,

    #[error("rejection sampling acceptance fell below 1e-3; bounding box too loose")]
    RejectionTooSparse,

    #[error("nonpositive input to the shape functional: {0}")]
    NonPositiveInput(&'static str),

    #[error("invalid domain spec: {0}")]
    InvalidSpec(String),

    #[error("invalid study config: {0}")]
    InvalidConfig(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
