use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("quadrature did not converge: value {value:e}, error estimate {error:e} after {evals} evaluations")]
    Quadrature { value: f64, error: f64, evals: usize },

    #[error("root bracketing failed: {0}")]
    Bracketing(String),

    #[error("surface-plasmon resonance pole: eps_m + eps_d = {residual:e} at omega = {omega}")]
    PlasmonPole { omega: f64, residual: f64 },

    #[error("step size rejected: {0}")]
    StepSize(String),

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),

    #[error("gapless point: {0}")]
    Gapless(String),

    #[error("sector dimension {dim} exceeds the cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("unsupported input: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, reason: format!("must be finite, got {value}") })
    }
}

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<()> {
    check_finite(name, value)?;
    if value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, reason: format!("must be > 0, got {value}") })
    }
}
