use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function has a pole at z = {0}")]
    GammaPole(f64),

    #[error("Mittag-Leffler series did not converge after {terms} terms (z = {z})")]
    MittagLefflerDivergence { z: f64, terms: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("evaluation point {t} is outside the domain of the expansion: {reason}")]
    Domain { t: f64, reason: &'static str },

    #[error("index {index} out of range for mesh with n = {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("curves are sampled on different meshes")]
    MeshMismatch,

    #[error("linear system is singular")]
    Singular,

    #[error("Newton iteration did not converge in {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("right-hand side is not affine in the state (deviation {0:e})")]
    NonAffine(f64),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
