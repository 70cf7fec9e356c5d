//! The spectral kernel `Λ(r; τ, g)` for the Gaussian weight: direct
//! quadrature, the saddle-point asymptotic and the phase expansion.

mod direct;
mod phase;
mod saddle;
mod weight;

pub use direct::{gamma_ratio_factor, lambda_branches, lambda_direct, SMALL_R};
pub use phase::{
    phase, phase_coefficients, phase_derivative, phase_expansion, phase_second_derivative, saddle_point,
    second_derivative_scale, Branch, PhaseExpansion,
};
pub use saddle::{
    lambda_saddle, lambda_saddle_with, saddle_damping, DEFAULT_CORRECTION_ORDER, NOMINAL_FRONT_CONSTANT,
    SADDLE_FRONT_CONSTANT, SADDLE_THRESHOLD_POWER,
};
pub use weight::{weight_cosine_transform, GaussianWeight};

use thiserror::Error;

use crate::hypergeom::HypergeomError;
use crate::numerics::NumericsError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LambdaError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("outside the asymptotic regime: {0}")]
    Regime(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Hypergeom(#[from] HypergeomError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Direct,
    Saddle,
}

/// A kernel value with its provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaResult {
    pub value: f64,
    pub method: Method,
    pub error_estimate: f64,
    /// Imaginary part left after the real projection (direct route only).
    pub imaginary_residual: f64,
}
