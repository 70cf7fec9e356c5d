use std::f64::consts::PI;

use super::{Branch, GaussianWeight, LambdaError, LambdaResult, Method};
use crate::hypergeom::{hyp2f1, HypParams};
use crate::numerics::{integrate_oscillatory, log_gamma};
use crate::C64;

/// Below this |r| the kernel is obtained from an even quadratic through
/// `r = h` and `r = 2h`, avoiding the `1/sinh(πr)` cancellation.
pub const SMALL_R: f64 = 1e-3;
/// ln(1e18): the integrand is dropped where its envelope falls below 1e-18.
const LOG_CUTOFF: f64 = 41.446_531_673_892_82;
const HYP_TOL: f64 = 1e-16;

/// `(1 + i/sinh(πr)) Γ(1/2 + ir)² / Γ(1 + 2ir)` for `r ≠ 0`.
pub fn gamma_ratio_factor(r: f64) -> Result<C64, LambdaError> {
    let half = C64::new(0.5, r);
    let log_ratio = 2.0 * log_gamma(half)? - log_gamma(C64::new(1.0, 2.0 * r))?;
    let sinh = (PI * r).sinh();
    Ok(C64::new(1.0, 1.0 / sinh) * log_ratio.exp())
}

/// Which part of `cos(T log(1+y))` multiplies the bracket.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Carrier {
    Cosine,
    Half(Branch),
}

/// Integration limits in `v = log y` for a given truncation scale.
pub(crate) fn v_range(tau: f64, w: &GaussianWeight, truncation: f64) -> (f64, f64) {
    let v_min = -truncation * LOG_CUTOFF / (2.0 * tau - 0.5);
    let u_max = truncation * 2.0 * LOG_CUTOFF.sqrt() / w.width();
    (v_min, u_max.exp_m1().ln())
}

/// Real envelope `y^{2τ-1/2}(1+y)^{-τ}exp(-G²log²(1+y)/4)` in `v = log y`.
fn real_envelope(v: f64, tau: f64, g: f64) -> f64 {
    let y = v.exp();
    let u = y.ln_1p();
    ((2.0 * tau - 0.5) * v - tau * u - 0.25 * (g * u).powi(2)).exp()
}

fn envelope_peak(tau: f64, w: &GaussianWeight, range: (f64, f64)) -> f64 {
    let n = 400;
    (0..=n)
        .map(|i| real_envelope(range.0 + (range.1 - range.0) * i as f64 / n as f64, tau, w.width()))
        .fold(0.0, f64::max)
}

/// `∫ envelope · carrier · B · F(1/2+ir, 1/2+ir; 1+2ir; -y) y^{ir} dv`, with the
/// integrand scaled so that `|envelope · B|` peaks at one.  Returns the integral and the peak scale.
pub(crate) fn kernel_integral(
    r: f64,
    tau: f64,
    w: &GaussianWeight,
    carrier: Carrier,
    truncation: f64,
    tol: f64,
) -> Result<(C64, f64, f64), LambdaError> {
    let b = gamma_ratio_factor(r)?;
    let range = v_range(tau, w, truncation);
    let peak = envelope_peak(tau, w, range) * b.norm();
    let (g, t) = (w.width(), w.center());
    let alpha = C64::new(0.5, r);
    let gamma = C64::new(1.0, 2.0 * r);
    let hyp_failure = std::cell::Cell::new(None);
    let envelope = |v: f64| -> C64 {
        let y = v.exp();
        let u = y.ln_1p();
        let carrier = match carrier {
            Carrier::Cosine => C64::new((t * u).cos(), 0.0),
            Carrier::Half(Branch::Minus) => 0.5 * C64::from_polar(1.0, -t * u),
            Carrier::Half(Branch::Plus) => 0.5 * C64::from_polar(1.0, t * u),
        };
        let f = match hyp2f1(&HypParams::new(alpha, alpha, gamma, C64::new(-y, 0.0)), HYP_TOL) {
            Ok(f) => f,
            Err(e) => {
                hyp_failure.set(Some(e));
                C64::new(f64::NAN, 0.0)
            }
        };
        real_envelope(v, tau, g) / peak * carrier * b * f
    };
    let result = integrate_oscillatory(envelope, r, range.0, range.1, tol);
    if let Some(e) = hyp_failure.take() {
        return Err(e.into());
    }
    let result = result?;
    Ok((result.value, result.error_estimate, peak))
}

fn check_inputs(r: f64, tau: f64, w: &GaussianWeight, tol: f64) -> Result<(), LambdaError> {
    if !(tau > 0.5 && tau < 1.0) {
        return Err(LambdaError::Precondition(format!("τ = {tau} outside (1/2, 1)")));
    }
    if !(tol > 0.0) {
        return Err(LambdaError::Precondition(format!("tolerance {tol}")));
    }
    let t = w.center();
    let r_max = t / w.width() * t.ln().powi(5);
    if !(r.abs() <= r_max) {
        return Err(LambdaError::Precondition(format!("|r| = {r} exceeds (T/G)·log⁵T = {r_max}")));
    }
    Ok(())
}

/// Unguarded evaluation for `r ≠ 0`: `½(J(r) + J(-r))`, whose two halves are
/// complex conjugates of each other in exact arithmetic.
pub(crate) fn direct_raw(r: f64, tau: f64, w: &GaussianWeight, truncation: f64, tol: f64) -> Result<(C64, f64), LambdaError> {
    let (plus, err_plus, peak) = kernel_integral(r, tau, w, Carrier::Cosine, truncation, tol)?;
    let (minus, err_minus, _) = kernel_integral(-r, tau, w, Carrier::Cosine, truncation, tol)?;
    Ok((0.5 * (plus + minus) * peak, 0.5 * (err_plus + err_minus) * peak))
}

/// The kernel `Λ(r; τ, g)` for the Gaussian weight by quadrature.
///
/// `tol` is an absolute tolerance on the integrand after scaling
/// `|envelope · B|` to unit peak height.
pub fn lambda_direct(r: f64, tau: f64, w: &GaussianWeight, tol: f64) -> Result<LambdaResult, LambdaError> {
    check_inputs(r, tau, w, tol)?;
    if r.abs() < SMALL_R {
        let h = SMALL_R;
        let (near, e1) = direct_raw(h, tau, w, 1.0, tol)?;
        let (far, e2) = direct_raw(2.0 * h, tau, w, 1.0, tol)?;
        let slope = (far.re - near.re) / (3.0 * h * h);
        let value = near.re + slope * (r * r - h * h);
        return Ok(LambdaResult {
            value,
            method: Method::Direct,
            error_estimate: e1 + e2,
            imaginary_residual: near.im.abs().max(far.im.abs()),
        });
    }
    let (raw, err) = direct_raw(r, tau, w, 1.0, tol)?;
    Ok(LambdaResult { value: raw.re, method: Method::Direct, error_estimate: err, imaginary_residual: raw.im.abs() })
}

/// The two halves of the kernel split along `cos(Tu) = (e^{iTu} + e^{-iTu})/2`:
/// returns `(minus, plus)` with `minus + plus = Λ`.
pub fn lambda_branches(r: f64, tau: f64, w: &GaussianWeight, tol: f64) -> Result<(f64, f64), LambdaError> {
    check_inputs(r, tau, w, tol)?;
    if r.abs() < SMALL_R {
        return Err(LambdaError::Precondition(format!("branch split needs |r| >= {SMALL_R}")));
    }
    let mut out = [0.0; 2];
    // the conjugate partner of the r-integral on one branch is the
    // (-r)-integral on the other
    for (slot, (branch, mirror)) in out.iter_mut().zip([(Branch::Minus, Branch::Plus), (Branch::Plus, Branch::Minus)]) {
        let (a, _, peak) = kernel_integral(r, tau, w, Carrier::Half(branch), 1.0, tol)?;
        let (b, _, _) = kernel_integral(-r, tau, w, Carrier::Half(mirror), 1.0, tol)?;
        *slot = 0.5 * (a + b).re * peak;
    }
    Ok((out[0], out[1]))
}
