use thiserror::Error;

use crate::extreal::ExtReal;

pub type Result<T> = std::result::Result<T, MorreyError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MorreyError {
    #[error("invalid exponent {0}: exponents must be positive")]
    InvalidExponent(f64),

    #[error("indeterminate power: {base}^0")]
    IndeterminatePower { base: ExtReal },

    #[error("quadrature failed: achieved error {achieved:e}, requested {requested:e}")]
    QuadratureFailure { achieved: f64, requested: f64 },

    #[error("Stieltjes integral undefined: integrand is positive where the integrator is infinite (from t = {threshold})")]
    UndefinedStieltjes { threshold: f64 },

    #[error("Stieltjes integral did not converge: {0}")]
    ToleranceFailure(String),

    #[error("inadmissible exponents: {0}")]
    InadmissibleExponents(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("not a weight: {0}")]
    NotAWeight(String),

    #[error("degenerate ratio: the source norm vanished for every candidate")]
    DegenerateRatio,

    #[error("no divergence witness found; best ratios {ratios:?}")]
    WitnessNotFound { ratios: Vec<f64> },

    #[error("A_p gate failed (estimate {ap_estimate}); embedding constant {embedding_constant}")]
    GateFailed {
        embedding_constant: ExtReal,
        ap_estimate: ExtReal,
    },

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}
