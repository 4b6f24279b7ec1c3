use thiserror::Error;

use crate::algebraize::Family;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid Lamé parameters: {0}")]
    InvalidParameters(String),

    #[error("family {family:?} is inadmissible for m = {m}, l = {l}: {reason}")]
    Inadmissible {
        family: Family,
        m: String,
        l: String,
        reason: String,
    },

    #[error("inconsistent parameters: {0}")]
    InconsistentParams(String),

    #[error("point x = {x} lies within {eps:e} of a pole of ξ(x) = sn x / cn x")]
    Pole { x: f64, eps: f64 },

    #[error("quadrature did not converge: estimated error {error:e} after {intervals} subintervals")]
    Quadrature { error: f64, intervals: usize },

    #[error("ODE step size underflow at t = {t}")]
    StepUnderflow { t: f64 },

    #[error("eigenvalue iteration failed to converge for a {size}x{size} matrix")]
    EigenFailure { size: usize },

    #[error("eigenvalue {re} + {im}i of family {family:?} is not real")]
    NonRealEigenvalue { family: Family, re: f64, im: f64 },

    #[error("cn exponent {exponent} is not usable for a pole-free wavefunction: {reason}")]
    Exponent { exponent: String, reason: String },

    #[error("no closed-form fixture for m = {m}, l = {l}")]
    NoFixture { m: String, l: String },
}

pub type Result<T> = std::result::Result<T, Error>;
