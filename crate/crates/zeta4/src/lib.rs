//! Numerical laboratory for the fourth moment of the Riemann zeta function
//! off the critical line.
//!
//! The crate is organised bottom-up: [`numerics`] holds special functions and
//! quadrature, [`zeta`] evaluates ζ and the sharp fourth moment,
//! [`hypergeom`] the Gauss function, [`lambda`] the spectral kernel and its
//! saddle-point asymptotics, [`moments`] the moment-side statistics and
//! [`spectral`] the Maass-form data and spectral sums.

pub mod hypergeom;
pub mod lambda;
pub mod moments;
pub mod numerics;
pub mod spectral;
pub mod zeta;

pub use num_complex::Complex64 as C64;
