use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("point {0:?} does not lie on the surface")]
    NotOnSurface([i64; 4]),

    #[error("point {0:?} lies on a line of the surface")]
    OnLine([i64; 4]),

    #[error("torsor tuple {tuple:?} is invalid: {reason}")]
    TorsorInvariant { tuple: [i64; 10], reason: String },

    #[error("computational budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("region is unbounded: {0}")]
    UnboundedRegion(String),

    #[error("polytope is {0}")]
    BadPolytope(String),

    #[error("quadrature did not reach tolerance {tolerance:e} (error estimate {estimate:e})")]
    NonConvergent { tolerance: f64, estimate: f64 },

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}
