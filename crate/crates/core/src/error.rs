use thiserror::Error;

/// Errors raised across the library.
///
/// Variants split into configuration-level problems (bad input, invalid
/// model) and numerical failures (tolerance, stiffness, singular solves).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("validation error: {0}")]
    Validation(String),
    #[error("model invalid: {0}")]
    ModelInvalid(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("frame error: {0}")]
    Frame(String),
    #[error("degenerate support: {0}")]
    DegenerateSupport(String),
    #[error("step size underflow at t = {t}")]
    Stiffness { t: f64 },
    #[error("curvature sign violated: K = {k} at t = {t}")]
    CurvatureSign { k: f64, t: f64 },
    #[error("left the half-plane domain at t = {t}")]
    DomainExit { t: f64 },
    #[error("transport error: {0}")]
    Transport(String),
    #[error("root finding failed: {0}")]
    Range(String),
    #[error("divergent integral c({m},{n})")]
    Divergent { m: i64, n: i64 },
    #[error("quadrature did not reach tolerance {tol:e} (error estimate {err:e})")]
    Tolerance { tol: f64, err: f64 },
}

impl Error {
    /// True for errors caused by bad configuration rather than numerics.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Validation(_) | Error::ModelInvalid(_) | Error::OutOfRange(_) | Error::Divergent { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
