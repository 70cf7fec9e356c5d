//! Moment-side quantities: the Gaussian-smoothed moment, the explicit main
//! terms, the error term `E₂(T, σ)` and the statistics run on it.

mod main_term;
mod stats;
mod table;
mod weighted;

pub use main_term::{
    fit_secondary_coefficients, leading_terms, main_term, main_term_for, main_term_threequarters, real_zeta,
    SecondaryCoefficients, THREE_QUARTERS_GAP,
};
pub use stats::{
    error_moment_integral, growth_exponent, pearson_correlation, running_max, sign_change_scan, DyadicWindow, GrowthFit, SignChangeReport,
};
pub use table::{read_samples, write_samples, SAMPLE_HEADER};
pub use weighted::{
    gaussian_inner_mass, integrated_weighted_moment, residual_term_bound, residual_term_log_bound, smoothed_moment_curve, smoothing_sandwich_check,
    weighted_moment_i2, SandwichReport,
};

use thiserror::Error;

use crate::zeta::{fourth_moment_curve, sharp_fourth_moment, ZetaError};

#[derive(Debug, Error)]
pub enum MomentError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("σ = {0} is within 1e-3 of 3/4; use the σ = 3/4 main term")]
    NearThreeQuarters(f64),
    #[error("design matrix is rank deficient (condition number {0:e})")]
    RankDeficient(f64),
    #[error("degenerate data: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Zeta(#[from] ZetaError),
    #[error("table error: {0}")]
    Table(String),
}

/// The triple `(σ, T, G)` of the smoothed moment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentParameters {
    sigma: f64,
    t: f64,
    g: f64,
}

impl MomentParameters {
    /// Requires `1/2 < σ < 1` and `T^{1/3} <= G <= T^{0.99}`.
    pub fn new(sigma: f64, t: f64, g: f64) -> Result<Self, MomentError> {
        if !(sigma > 0.5 && sigma < 1.0) {
            return Err(MomentError::Precondition(format!("σ = {sigma} outside (1/2, 1)")));
        }
        if !(t.is_finite() && t > 1.0 && g.is_finite() && g > 0.0) {
            return Err(MomentError::Precondition(format!("need T > 1 and G > 0, got T = {t}, G = {g}")));
        }
        let (lo, hi) = (t.cbrt() * (1.0 - 1e-12), t.powf(0.99) * (1.0 + 1e-12));
        if g < lo || g > hi {
            return Err(MomentError::Precondition(format!("G = {g} outside [T^(1/3), T^0.99] = [{lo}, {hi}]")));
        }
        Ok(Self { sigma, t, g })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn g(&self) -> f64 {
        self.g
    }
}

/// One row of a moment table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSample {
    pub t: f64,
    pub sigma: f64,
    pub g: Option<f64>,
    pub sharp_moment: f64,
    pub main_term: f64,
    pub e2: f64,
    pub spectral_prediction: Option<f64>,
}

impl MomentSample {
    /// Builds a sample; `e2` is `sharp_moment - main_term` by definition.
    pub fn new(t: f64, sigma: f64, sharp_moment: f64, main_term: f64) -> Self {
        Self { t, sigma, g: None, sharp_moment, main_term, e2: sharp_moment - main_term, spectral_prediction: None }
    }
}

/// `E₂(T, σ)` at one height.
pub fn error_term_e2(t: f64, sigma: f64, coeffs: &SecondaryCoefficients, tol: f64) -> Result<MomentSample, MomentError> {
    let main = main_term_for(t, sigma, coeffs)?;
    let sharp = sharp_fourth_moment(sigma, t, tol)?.value;
    Ok(MomentSample::new(t, sigma, sharp, main))
}

/// `E₂` along an increasing grid, sharing one sweep of the moment integral.
pub fn error_term_series(
    sigma: f64,
    grid: &[f64],
    coeffs: &SecondaryCoefficients,
    tol: f64,
) -> Result<Vec<MomentSample>, MomentError> {
    let sharp = fourth_moment_curve(sigma, grid, tol)?;
    grid.iter()
        .zip(sharp)
        .map(|(&t, s)| Ok(MomentSample::new(t, sigma, s, main_term_for(t, sigma, coeffs)?)))
        .collect()
}

/// `∫_0^T I₂(V, σ, G) dV - M(T)` along a grid, where the secondary
/// coefficients of `M` are refitted on the grid itself, so that only the
/// oscillating part remains.  This is the error term seen at resolution `G`.
pub fn detrended_smoothed_error(sigma: f64, g: f64, grid: &[f64], tol: f64) -> Result<Vec<(f64, f64)>, MomentError> {
    let smoothed: Vec<(f64, f64)> = grid.iter().copied().zip(smoothed_moment_curve(sigma, g, grid, tol)?).collect();
    let coeffs = fit_secondary_coefficients(&smoothed, sigma)?;
    smoothed.into_iter().map(|(t, v)| Ok((t, v - main_term_for(t, sigma, &coeffs)?))).collect()
}

/// `(T, ∫_0^T |ζ(σ+it)|⁴ dt)` along an increasing grid.
pub fn sharp_moment_series(sigma: f64, grid: &[f64], tol: f64) -> Result<Vec<(f64, f64)>, MomentError> {
    let sharp = fourth_moment_curve(sigma, grid, tol)?;
    Ok(grid.iter().copied().zip(sharp).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameter_window() {
        assert!(MomentParameters::new(0.6, 1000.0, 100.0).is_ok());
        assert!(MomentParameters::new(0.6, 1000.0, 9.0).is_err());
        assert!(MomentParameters::new(0.6, 1000.0, 990.0).is_err());
        assert!(MomentParameters::new(0.5, 1000.0, 100.0).is_err());
        assert!(MomentParameters::new(1.0, 1000.0, 100.0).is_err());
    }

    #[test]
    fn definitional_identity() {
        let s = MomentSample::new(100.0, 0.6, 123.456, 120.0);
        assert_eq!(s.e2 + s.main_term, s.sharp_moment);
        assert_eq!(s.e2, s.sharp_moment - s.main_term);
    }

    #[test]
    fn single_point_matches_series() {
        let coeffs = SecondaryCoefficients::zero(0.6);
        let single = error_term_e2(60.0, 0.6, &coeffs, 1e-10).unwrap();
        let series = error_term_series(0.6, &[30.0, 60.0], &coeffs, 1e-10).unwrap();
        assert!((single.e2 - series[1].e2).abs() < 1e-7 * single.sharp_moment);
        assert_eq!(single.e2, single.sharp_moment - single.main_term);
    }
}
