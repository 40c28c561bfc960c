use thiserror::Error;

/// Errors raised by the lomse computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LomseError {
    #[error("(n, p) = ({n}, {p}) is not one of the admissible families (2l+1, 2l), (4l+3, 4l), (15, 8)")]
    InvalidFamily { n: i64, p: i64 },
    #[error("harmonic degree k = {k} must be an even integer >= 2")]
    InvalidDegree { k: i64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("profile ends at r = {r_max:e}, cannot integrate up to R = {requested:e}")]
    DomainTooShort { requested: f64, r_max: f64 },
    #[error("step size fell below {h_min:e} at t = {t}")]
    StepSizeUnderflow { t: f64, h_min: f64 },
    #[error("non-finite state at t = {t}")]
    NonFiniteState { t: f64 },
    #[error("orbit has {found} psi-zero events, need at least {needed}")]
    InsufficientEvents { found: usize, needed: usize },
    #[error("orbit did not converge to the cone equilibrium")]
    NotConverged,
    #[error("no barrier certificate applies: {0}")]
    WrongCase(String),
    #[error("operation requires a stable spiral (Type II) equilibrium")]
    WrongType,
    #[error("point is not on the unit sphere (|x| = {norm})")]
    NotOnSphere { norm: f64 },
    #[error("quadrature did not reach tolerance {tol:e} (estimate {estimate:e})")]
    Quadrature { tol: f64, estimate: f64 },
}

pub type Result<T> = std::result::Result<T, LomseError>;
