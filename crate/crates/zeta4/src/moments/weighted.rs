use std::f64::consts::PI;

use super::{MomentError, MomentParameters};
use crate::lambda::GaussianWeight;
use rayon::prelude::*;

use crate::numerics::{gauss_legendre, EULER_GAMMA};
use crate::zeta::{fourth_moment_between, integrate_panels, moment_panel_length, zeta, ZetaConfig, ZetaError, ZetaLine};
use crate::C64;

/// Half-width of the Gaussian window kept for a target tolerance.
fn window_half_width(g: f64, tol: f64) -> f64 {
    6.0 * g * ((1.0f64).max((1.0 / tol).ln()) / 36.0 + 1.0).sqrt()
}

fn check_tol(tol: f64) -> Result<(), MomentError> {
    if tol > 0.0 && tol < 1.0 {
        Ok(())
    } else {
        Err(MomentError::Precondition(format!("tolerance {tol} outside (0, 1)")))
    }
}

/// `I₂(T, σ, G) = (√π G)^{-1} ∫ |ζ(σ + iT + it)|⁴ e^{-(t/G)²} dt` for `T <= 10⁴`.
pub fn weighted_moment_i2(p: &MomentParameters, tol: f64) -> Result<f64, MomentError> {
    check_tol(tol)?;
    if p.t() > 1e4 {
        return Err(MomentError::Precondition(format!("T = {} above 1e4", p.t())));
    }
    let (t, g) = (p.t(), p.g());
    let half = window_half_width(g, tol);
    let line = ZetaLine::new(p.sigma(), t + half, ZetaConfig::default())?;
    // integrate without the 1/(√π G) so that panel values are O(|ζ|⁴ · h)
    let f = |u: f64| Ok(line.abs_pow4(u)? * (-((u - t) / g).powi(2)).exp());
    let r = integrate_panels(f, t - half, t + half, moment_panel_length(t + half), tol)?;
    Ok(r.value / (PI.sqrt() * g))
}

/// `∫_a^b I₂(V, σ, G) dV`, computed as `∫ |ζ(σ+iu)|⁴ w(u) du` with
/// `w(u) = (erf((b-u)/G) - erf((a-u)/G))/2`.
pub fn integrated_weighted_moment(sigma: f64, g: f64, a: f64, b: f64, tol: f64) -> Result<f64, MomentError> {
    check_tol(tol)?;
    if b <= a {
        return Ok(0.0);
    }
    let half = window_half_width(g, tol);
    let (lo, hi) = (a - half, b + half);
    let reach = lo.abs().max(hi.abs());
    let line = ZetaLine::new(sigma, reach, ZetaConfig::default())?;
    let f = |u: f64| {
        let w = 0.5 * (libm::erf((b - u) / g) - libm::erf((a - u) / g));
        Ok(line.abs_pow4(u)? * w)
    };
    Ok(integrate_panels(f, lo, hi, moment_panel_length(reach), tol)?.value)
}

/// `∫_0^T I₂(V, σ, G) dV` at every point of `grid`.
///
/// The integrand `|ζ(σ+iu)|⁴` is sampled once on Gauss–Legendre panels
/// covering all windows, and each height only re-weights those samples with
/// `(erf((T-u)/G) + erf(u/G))/2`.  This is the Gaussian-smoothed
/// counterpart of the sharp moment curve.
pub fn smoothed_moment_curve(sigma: f64, g: f64, grid: &[f64], tol: f64) -> Result<Vec<f64>, MomentError> {
    check_tol(tol)?;
    if !(g > 0.0) || grid.iter().any(|&t| !(t >= 0.0)) {
        return Err(MomentError::Precondition("need G > 0 and non-negative heights".into()));
    }
    let Some(t_max) = grid.iter().copied().reduce(f64::max) else { return Ok(Vec::new()) };
    let half = window_half_width(g, tol);
    let (lo, hi) = (-half, t_max + half);
    let reach = lo.abs().max(hi);
    let line = ZetaLine::new(sigma, reach, ZetaConfig::default())?;
    let h = moment_panel_length(reach);
    let panels = ((hi - lo) / h).ceil() as usize;
    let width = (hi - lo) / panels as f64;
    let (x, w) = gauss_legendre(12);
    let samples: Vec<(f64, f64)> = (0..panels)
        .into_par_iter()
        .map(|k| {
            let mid = lo + width * (k as f64 + 0.5);
            x.iter()
                .zip(&w)
                .map(|(xi, wi)| {
                    let u = mid + 0.5 * width * xi;
                    Ok((u, 0.5 * width * wi * line.abs_pow4(u)?))
                })
                .collect::<Result<Vec<_>, ZetaError>>()
        })
        .collect::<Result<Vec<_>, ZetaError>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(grid
        .par_iter()
        .map(|&t| {
            samples
                .iter()
                .map(|&(u, m)| m * 0.5 * (libm::erf((t - u) / g) + libm::erf(u / g)))
                .sum::<f64>()
        })
        .collect())
}

/// `(√π G)^{-1} ∫_{-G log T}^{G log T} e^{-(t/G)²} dt = erf(log T)`.
pub fn gaussian_inner_mass(t: f64) -> f64 {
    libm::erf(t.ln())
}

/// Both sides of the smoothing sandwich for `∫_T^{2T} |ζ(σ+it)|⁴ dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SandwichReport {
    pub sharp: f64,
    /// `∫ I₂` over `[T - G log T, 2T + G log T]`.
    pub outer: f64,
    /// `∫ I₂` over `[T + G log T, 2T - G log T]` (zero when that is empty).
    pub inner: f64,
    /// `(outer - sharp)/sharp`.
    pub upper_slack: f64,
    /// `(sharp - inner)/sharp`.
    pub lower_slack: f64,
}

/// Checks that the sharp moment over `[T, 2T]` sits between the inner and
/// outer integrals of `I₂`; slacks are relative and should be `>= -tol`.
pub fn smoothing_sandwich_check(t: f64, p: &MomentParameters, tol: f64) -> Result<SandwichReport, MomentError> {
    check_tol(tol)?;
    let (sigma, g) = (p.sigma(), p.g());
    let shift = g * t.ln();
    let line = ZetaLine::new(sigma, 2.0 * t, ZetaConfig::default())?;
    let sharp = fourth_moment_between(&line, t, 2.0 * t, tol)?.value;
    let outer = integrated_weighted_moment(sigma, g, t - shift, 2.0 * t + shift, tol)?;
    let inner = integrated_weighted_moment(sigma, g, t + shift, 2.0 * t - shift, tol)?;
    Ok(SandwichReport {
        sharp,
        outer,
        inner,
        upper_slack: (outer - sharp) / sharp,
        lower_slack: (sharp - inner) / sharp,
    })
}

/// Natural log of [`residual_term_bound`]; stays finite when the bound underflows.
pub fn residual_term_log_bound(w: &GaussianWeight, sigma: f64) -> Result<f64, MomentError> {
    if !(sigma > 0.5 && sigma < 1.0) {
        return Err(MomentError::Precondition(format!("σ = {sigma} outside (1/2, 1)")));
    }
    let (t, g) = (w.center(), w.width());
    let x = 2.0 * sigma - 1.0;
    let cfg = ZetaConfig::default();
    let z = zeta(C64::new(x, 0.0), &cfg)?.re;
    // complex step: ζ is real on the real axis
    let step = 1e-20;
    let dz = zeta(C64::new(x, step), &cfg)?.im / step;
    let delta = 1.0 - sigma;
    // |g(iδ')| for δ' = σ - 1: each bump has modulus exp(-(T² - δ²)/G²)
    let log_g = -(t * t - delta * delta) / (g * g) - (PI.sqrt() * g).ln();
    let derivative_ratio = 2.0 * (t + delta) / (g * g);
    let bracket = (EULER_GAMMA - dz / z).abs() + 0.5 * derivative_ratio;
    Ok((8.0 * PI * z * z * bracket).ln() + log_g)
}

/// Upper bound for the modulus of the residual term
/// `-8π ζ(2σ-1)² Re{(c_E - ζ'/ζ(2σ-1)) g((σ-1)i) + i g'((σ-1)i)/2}`.
pub fn residual_term_bound(w: &GaussianWeight, sigma: f64) -> Result<f64, MomentError> {
    Ok(residual_term_log_bound(w, sigma)?.exp())
}
