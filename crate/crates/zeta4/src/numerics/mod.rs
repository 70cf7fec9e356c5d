//! Shared numerical substrate: complex log-gamma, quadrature rules and a few
//! closed-form integrals used by the kernel asymptotics.

mod constants;
mod gamma;
mod gauss;
mod oscillatory;
mod quadrature;
pub mod series;

pub use constants::{Constants, BERNOULLI_EVEN, EULER_GAMMA, LN_2PI};
pub use gamma::{gamma_log_expansion, ln_sin_pi, log_gamma, GammaLogExpansion};
pub use gauss::{gauss_legendre, gaussian_moment};
pub use oscillatory::integrate_oscillatory;
pub use quadrature::{integrate_adaptive, integrate_adaptive_with_budget, QuadratureResult, MAX_EVALUATIONS};

use thiserror::Error;

pub type C64 = num_complex::Complex64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("pole of the gamma function at s = {re} + {im}i")]
    Pole { re: f64, im: f64 },
    #[error("argument outside the asymptotic domain: {0}")]
    Domain(String),
    #[error("quadrature did not converge after {evaluations} evaluations (error estimate {error_estimate:e})")]
    NonConvergence { evaluations: usize, error_estimate: f64 },
    #[error("integrand returned a non-finite value at x = {x}")]
    NonFinite { x: f64 },
    #[error("invalid integration request: {0}")]
    InvalidInterval(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}
