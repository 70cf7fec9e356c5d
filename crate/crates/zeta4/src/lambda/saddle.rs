use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, LN_2, PI, SQRT_2};

use super::direct::gamma_ratio_factor;
use super::phase::{phase_coefficients, phase_expansion, phase_second_derivative, Branch};
use super::{GaussianWeight, LambdaError, LambdaResult, Method};
use crate::hypergeom::{hyp2f1_series, HypParams};
use crate::numerics::gaussian_moment;
use crate::numerics::series::Series;
use crate::C64;

/// Front constant of the leading saddle term, fitted by least squares
/// against the direct quadrature at τ = 0.6, T = 10⁴, G = T^0.6 on
/// r ∈ [159, 161] with the default correction depth (reproduce with
/// `examples/calibrate_saddle.rs`).  It sits 1.1e-4 above the stationary
/// phase value π/√2.
pub const SADDLE_FRONT_CONSTANT: f64 = 2.221_683_025_406_449;

/// The first-order stationary phase prediction for [`SADDLE_FRONT_CONSTANT`].
pub const NOMINAL_FRONT_CONSTANT: f64 = PI / SQRT_2;

/// Correction depth used by default: Gaussian moments up to `ξ^{18}`.  This is
/// the smallest depth whose first omitted correction at the calibration
/// point (r = 160) is below 1e-3 of the kernel.
pub const DEFAULT_CORRECTION_ORDER: usize = 3;

/// Half-width of the ξ-interval in the Gaussian moments; the Taylor
/// expansion about the saddle has radius `|ξ| < 1`.
const MOMENT_RANGE: f64 = 1.0;

/// `r >= (log T)^{SADDLE_THRESHOLD_POWER}` is required by [`lambda_saddle`].
pub const SADDLE_THRESHOLD_POWER: f64 = 1.0;

/// `exp(q(ξ))` for a polynomial with `q(0) = 0`, truncated to the length of `q`.
fn exp_poly(q: &[C64]) -> Vec<C64> {
    let mut p = vec![C64::new(0.0, 0.0); q.len()];
    p[0] = C64::new(1.0, 0.0);
    for m in 1..q.len() {
        let s: C64 = (1..=m).map(|k| q[k] * p[m - k] * k as f64).sum();
        p[m] = s / m as f64;
    }
    p
}

/// Taylor jets at `y0` of the log-amplitude and the minus-branch phase.
fn jets(y0: f64, r: f64, tau: f64, w: &GaussianWeight, order: usize) -> (Series, Series) {
    let y = Series::variable(y0, order);
    let log_y = y.ln();
    let log_one_plus = y.add_constant(1.0).ln();
    let log_half_root = y.add_constant(1.0).sqrt().add_constant(1.0).scale(0.5).ln();
    let g = w.width();
    let amplitude = &(&log_y.scale(2.0 * tau - 1.5) - &log_one_plus.scale(tau))
        - &(&log_half_root + &(&log_one_plus * &log_one_plus).scale(0.25 * g * g));
    let phase = &(&log_y.scale(r) - &log_half_root.scale(2.0 * r)) - &log_one_plus.scale(w.center());
    (amplitude, phase)
}

/// The saddle contribution divided by the leading form
/// `(π/√2) T^{1/2-2τ} r^{2τ-3/2} exp(-G² log²(1+y0)/4) e^{i(Φ - π/2)}`,
/// keeping Gaussian moments `M_k` for `k <= 3·order`.
fn correction_factor(r: f64, tau: f64, w: &GaussianWeight, order: usize) -> Result<C64, LambdaError> {
    let t = w.center();
    let y0 = super::saddle_point(r, t);
    let c = -y0 * y0 * phase_second_derivative(y0, r, t, Branch::Minus);
    let max_moment = 3 * order;
    let (amp, phase) = jets(y0, r, tau, w, 2 * max_moment);
    let h = C64::from_polar(y0, -FRAC_PI_4);
    let mut q = vec![C64::new(0.0, 0.0); 2 * max_moment + 1];
    let mut h_pow = C64::new(1.0, 0.0);
    for (n, qn) in q.iter_mut().enumerate().skip(1) {
        h_pow *= h;
        let phase_part = if n >= 3 { phase.coeff(n) } else { 0.0 };
        *qn = C64::new(amp.coeff(n), phase_part) * h_pow;
    }
    let p = exp_poly(&q);
    let mut sum = C64::new(0.0, 0.0);
    for k in 0..=max_moment {
        sum += p[2 * k] * gaussian_moment(k as u32, c, MOMENT_RANGE)?;
    }

    // Remaining hypergeometric factor after the quadratic transformation.
    let alpha = C64::new(0.5, r);
    let root = (1.0 + y0).sqrt();
    let z = ((1.0 - root) / (1.0 + root)).powi(2);
    let remainder = hyp2f1_series(&HypParams::new(alpha, C64::new(0.5, 0.0), alpha + 0.5, C64::new(z, 0.0)), 1e-16)?;

    let b = gamma_ratio_factor(r)?;
    let u0 = y0.ln_1p();
    let damping_free = (amp.coeff(0) + 0.25 * (w.width() * u0).powi(2)).exp();
    let prefactor = t.powf(0.5 - 2.0 * tau) * r.powf(2.0 * tau - 1.5);
    // e^{iF(y0)} = e^{iΦ} e^{ir log 4}; the e^{iΦ} and e^{-iπ/2} are factored out
    let rotation = C64::from_polar(1.0, 2.0 * LN_2 * r + FRAC_PI_2);
    Ok(0.5 * b * damping_free * remainder * h * rotation * sum / (NOMINAL_FRONT_CONSTANT * prefactor))
}

fn check_saddle_window(r: f64, tau: f64, w: &GaussianWeight) -> Result<(), LambdaError> {
    if !(tau > 0.5 && tau < 1.0) {
        return Err(LambdaError::Precondition(format!("τ = {tau} outside (1/2, 1)")));
    }
    let t = w.center();
    let r_max = t / w.width() * t.ln().powi(5);
    if !(r > 0.0 && r <= r_max) {
        return Err(LambdaError::Precondition(format!("r = {r} outside (0, {r_max}]")));
    }
    let r_min = t.ln().powf(SADDLE_THRESHOLD_POWER);
    if r < r_min {
        return Err(LambdaError::Regime(format!(
            "r = {r} below the saddle threshold (log T)^{SADDLE_THRESHOLD_POWER} = {r_min}; |Λ| ≪ T^(1/2-2τ) there"
        )));
    }
    Ok(())
}

/// Saddle-point approximation of the kernel with the phase expanded to
/// order `phase_order` and the default correction depth.
pub fn lambda_saddle(r: f64, tau: f64, w: &GaussianWeight, phase_order: usize) -> Result<LambdaResult, LambdaError> {
    lambda_saddle_with(r, tau, w, phase_order, DEFAULT_CORRECTION_ORDER)
}

/// [`lambda_saddle`] with an explicit correction depth; `0` is the bare
/// leading term.
pub fn lambda_saddle_with(
    r: f64,
    tau: f64,
    w: &GaussianWeight,
    phase_order: usize,
    corrections: usize,
) -> Result<LambdaResult, LambdaError> {
    check_saddle_window(r, tau, w)?;
    let t = w.center();
    let expansion = phase_expansion(r, t, phase_order)?;
    let prefactor = t.powf(0.5 - 2.0 * tau) * r.powf(2.0 * tau - 1.5);
    let damping = (-0.25 * (w.width() * expansion.y0.ln_1p()).powi(2)).exp();
    let scale = SADDLE_FRONT_CONSTANT * prefactor * damping;
    let carrier = C64::from_polar(1.0, expansion.truncated() - FRAC_PI_2);

    let q = correction_factor(r, tau, w, corrections)?;
    let q_next = correction_factor(r, tau, w, corrections + 1)?;
    let value = scale * (carrier * q).re;
    let next_phase_coeff = phase_coefficients(phase_order + 1)[phase_order - 2];
    let phase_error = (next_phase_coeff * r * (r / t).powi(phase_order as i32)).abs();
    let error_estimate = scale * ((q_next - q).norm() + q.norm() * phase_error);
    Ok(LambdaResult { value, method: Method::Saddle, error_estimate, imaginary_residual: 0.0 })
}

/// Gaussian damping `exp(-G² log²(1+y0)/4)` at the saddle point.
pub fn saddle_damping(r: f64, w: &GaussianWeight) -> f64 {
    let y0 = super::saddle_point(r, w.center());
    (-0.25 * (w.width() * y0.ln_1p()).powi(2)).exp()
}
