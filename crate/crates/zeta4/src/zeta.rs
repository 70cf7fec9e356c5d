//! The Riemann zeta function by Euler–Maclaurin summation, the functional
//! equation factor, and the sharp fourth moment `∫ |ζ(σ+it)|⁴ dt`.

use std::f64::consts::PI;

use rayon::prelude::*;
use thiserror::Error;

use crate::numerics::{integrate_adaptive, ln_sin_pi, log_gamma, NumericsError, BERNOULLI_EVEN, C64};

/// Largest |Im s| accepted by [`zeta`].
pub const MAX_HEIGHT: f64 = 1e5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZetaError {
    #[error("ζ has a pole at s = 1")]
    Pole,
    #[error("|Im s| = {0} exceeds the supported window (1e5)")]
    OutOfWindow(f64),
    #[error("s = {re} + {im}i is too close to a pole of the functional-equation factor")]
    NearPole { re: f64, im: f64 },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Parameters of the Euler–Maclaurin evaluation.
///
/// `euler_maclaurin_terms` is the index of the highest Bernoulli number used
/// in the tail correction (so 20 means `B_2, ..., B_20`).  The partial sum
/// length is `max(10, ⌈cutoff_scale·|t|/(2π)⌉ + cutoff_offset)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaConfig {
    pub euler_maclaurin_terms: usize,
    pub cutoff_scale: f64,
    pub cutoff_offset: usize,
}

impl Default for ZetaConfig {
    fn default() -> Self {
        Self {
            euler_maclaurin_terms: 20,
            cutoff_scale: 3.3,
            cutoff_offset: 10,
        }
    }
}

impl ZetaConfig {
    pub fn new(euler_maclaurin_terms: usize, cutoff_scale: f64, cutoff_offset: usize) -> Result<Self, ZetaError> {
        let cfg = Self { euler_maclaurin_terms, cutoff_scale, cutoff_offset };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ZetaError> {
        let m = self.euler_maclaurin_terms;
        if m < 2 || m > 20 || m % 2 != 0 {
            return Err(ZetaError::Config(format!("euler_maclaurin_terms = {m} must be even and in 2..=20")));
        }
        if !(self.cutoff_scale >= 1.3) {
            return Err(ZetaError::Config(format!("cutoff_scale = {} must be at least 1.3", self.cutoff_scale)));
        }
        Ok(())
    }

    /// Number of terms summed directly for height `t`.
    pub fn cutoff(&self, t: f64) -> usize {
        let scaled = (self.cutoff_scale * t.abs() / (2.0 * PI)).ceil() as usize;
        (scaled + self.cutoff_offset).max(10)
    }
}

/// `ζ(s)` for `s ≠ 1`, `|Im s| <= 1e5`.
pub fn zeta(s: C64, cfg: &ZetaConfig) -> Result<C64, ZetaError> {
    if (s - 1.0).norm() < 1e-14 {
        return Err(ZetaError::Pole);
    }
    if !(s.im.abs() <= MAX_HEIGHT) {
        return Err(ZetaError::OutOfWindow(s.im.abs()));
    }
    if s.im < 0.0 {
        return Ok(zeta_upper(s.conj(), cfg).conj());
    }
    Ok(zeta_upper(s, cfg))
}

fn zeta_upper(s: C64, cfg: &ZetaConfig) -> C64 {
    let n = cfg.cutoff(s.im);
    let mut head = C64::new(0.0, 0.0);
    for k in (1..n).rev() {
        head += (-s * (k as f64).ln()).exp();
    }
    head + em_tail(s, n, cfg.euler_maclaurin_terms)
}

/// `ζ(s) - Σ_{n<N} n^{-s}` by Euler–Maclaurin.
fn em_tail(s: C64, n: usize, terms: usize) -> C64 {
    let nf = n as f64;
    let ln_n = nf.ln();
    let n_pow = (-s * ln_n).exp(); // N^{-s}
    let mut tail = n_pow * nf / (s - 1.0) + n_pow * 0.5;
    // B_{2k}/(2k)! · s(s+1)···(s+2k-2) · N^{-s-2k+1}
    let mut rising = s; // s(s+1)···(s+2k-2)
    let mut power = n_pow / nf; // N^{-s-2k+1}
    let mut factorial = 2.0; // (2k)!
    let inv_n2 = 1.0 / (nf * nf);
    for k in 1..=terms / 2 {
        tail += rising * power * (BERNOULLI_EVEN[k - 1] / factorial);
        let kf = k as f64;
        rising *= (s + (2.0 * kf - 1.0)) * (s + 2.0 * kf);
        power *= inv_n2;
        factorial *= (2.0 * kf + 1.0) * (2.0 * kf + 2.0);
    }
    tail
}

/// `χ(s) = 2^s π^{s-1} sin(πs/2) Γ(1-s)`, so that `ζ(s) = χ(s) ζ(1-s)`.
pub fn chi_factor(s: C64) -> Result<C64, ZetaError> {
    let ln2 = std::f64::consts::LN_2;
    let lnpi = PI.ln();
    if s.re < 0.5 {
        let ln_gamma = log_gamma(1.0 - s)?;
        let ln = s * ln2 + (s - 1.0) * lnpi + ln_sin_pi(s * 0.5) + ln_gamma;
        return Ok(ln.exp());
    }
    // Equivalent form 2^{s-1} π^s / (Γ(s) cos(πs/2)); poles at odd integers.
    let nearest_odd = 2.0 * ((s.re - 1.0) / 2.0).round() + 1.0;
    if (s - nearest_odd).norm() < 1e-10 {
        return Err(ZetaError::NearPole { re: s.re, im: s.im });
    }
    let ln_gamma = log_gamma(s)?;
    let ln = (s - 1.0) * ln2 + s * lnpi - ln_gamma - ln_sin_pi((s + 1.0) * 0.5);
    Ok(ln.exp())
}

/// `|ζ(σ+it)|⁴`.
pub fn abs_zeta_pow4(sigma: f64, t: f64, cfg: &ZetaConfig) -> Result<f64, ZetaError> {
    let z = zeta(C64::new(sigma, t), cfg)?;
    let m = z.norm_sqr();
    Ok(m * m)
}

/// Evaluator for ζ on one vertical line; caches `ln n` and `n^{-σ}`.
#[derive(Debug, Clone)]
pub struct ZetaLine {
    sigma: f64,
    cfg: ZetaConfig,
    ln_n: Vec<f64>,
    amp: Vec<f64>,
}

impl ZetaLine {
    /// Prepares evaluation on `Re s = σ` for heights up to `t_max`.
    pub fn new(sigma: f64, t_max: f64, cfg: ZetaConfig) -> Result<Self, ZetaError> {
        cfg.validate()?;
        if !(t_max.abs() <= MAX_HEIGHT) {
            return Err(ZetaError::OutOfWindow(t_max.abs()));
        }
        let n = cfg.cutoff(t_max);
        let ln_n: Vec<f64> = (0..n).map(|k| (k.max(1) as f64).ln()).collect();
        let amp = ln_n.iter().map(|l| (-sigma * l).exp()).collect();
        Ok(Self { sigma, cfg, ln_n, amp })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn zeta(&self, t: f64) -> Result<C64, ZetaError> {
        let n = self.cfg.cutoff(t);
        if n > self.ln_n.len() {
            return zeta(C64::new(self.sigma, t), &self.cfg);
        }
        if (self.sigma - 1.0).abs() < 1e-14 && t.abs() < 1e-14 {
            return Err(ZetaError::Pole);
        }
        let ta = t.abs();
        let mut head = C64::new(0.0, 0.0);
        for k in (1..n).rev() {
            let (sin, cos) = (ta * self.ln_n[k]).sin_cos();
            head += C64::new(cos, -sin) * self.amp[k];
        }
        let z = head + em_tail(C64::new(self.sigma, ta), n, self.cfg.euler_maclaurin_terms);
        Ok(if t < 0.0 { z.conj() } else { z })
    }

    pub fn abs_pow4(&self, t: f64) -> Result<f64, ZetaError> {
        let m = self.zeta(t)?.norm_sqr();
        Ok(m * m)
    }
}

/// A real integral with its error bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealIntegral {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Panel length used for `|ζ|⁴` integrals reaching height `t_max`.
pub fn moment_panel_length(t_max: f64) -> f64 {
    (PI / (2.0 + t_max.abs()).ln()).min(0.25)
}

/// Splits `[a, b]` into panels of length at most `h`, integrates each
/// adaptively to relative tolerance `tol` and sums in panel order.
pub fn integrate_panels<F>(f: F, a: f64, b: f64, h: f64, tol: f64) -> Result<RealIntegral, ZetaError>
where
    F: Fn(f64) -> Result<f64, ZetaError> + Sync,
{
    if b <= a {
        return Ok(RealIntegral { value: 0.0, error_estimate: 0.0, evaluations: 0 });
    }
    let count = ((b - a) / h).ceil().max(1.0) as usize;
    let width = (b - a) / count as f64;
    let pieces: Vec<Result<RealIntegral, ZetaError>> = (0..count)
        .into_par_iter()
        .map(|i| {
            let lo = a + width * i as f64;
            let hi = if i + 1 == count { b } else { a + width * (i + 1) as f64 };
            let failure = std::sync::Mutex::new(None);
            let g = |t: f64| match f(t) {
                Ok(v) => C64::new(v, 0.0),
                Err(e) => {
                    failure.lock().expect("poisoned").get_or_insert(e);
                    C64::new(f64::NAN, 0.0)
                }
            };
            let r = integrate_adaptive(g, lo, hi, tol);
            if let Some(e) = failure.into_inner().expect("poisoned") {
                return Err(e);
            }
            let r = r?;
            Ok(RealIntegral { value: r.value.re, error_estimate: r.error_estimate, evaluations: r.evaluations })
        })
        .collect();
    let mut total = RealIntegral { value: 0.0, error_estimate: 0.0, evaluations: 0 };
    for p in pieces {
        let p = p?;
        total.value += p.value;
        total.error_estimate += p.error_estimate;
        total.evaluations += p.evaluations;
    }
    Ok(total)
}

/// `∫_{t0}^{t1} |ζ(σ+it)|⁴ dt` with the standard moment panels; `[0, 1]` is
/// covered by a finer fixed subdivision.
pub fn fourth_moment_between(line: &ZetaLine, t0: f64, t1: f64, tol: f64) -> Result<RealIntegral, ZetaError> {
    if t1 <= t0 {
        return Ok(RealIntegral { value: 0.0, error_estimate: 0.0, evaluations: 0 });
    }
    let h = moment_panel_length(t1);
    let f = |t: f64| line.abs_pow4(t);
    let mut total = RealIntegral { value: 0.0, error_estimate: 0.0, evaluations: 0 };
    let mut start = t0;
    if t0 < 1.0 {
        let end = t1.min(1.0);
        let fine = integrate_panels(f, t0, end, 1.0 / 16.0, tol)?;
        total = fine;
        start = end;
    }
    let rest = integrate_panels(f, start, t1, h, tol)?;
    total.value += rest.value;
    total.error_estimate += rest.error_estimate;
    total.evaluations += rest.evaluations;
    Ok(total)
}

/// Sharp fourth moment `∫_0^T |ζ(σ+it)|⁴ dt` for `1/2 < σ < 1`.
///
/// At `σ = 1` the integrand has a non-integrable `t^{-4}` singularity at the
/// origin, so the integral is taken over `[1, T]` instead.
pub fn sharp_fourth_moment(sigma: f64, t: f64, tol: f64) -> Result<RealIntegral, ZetaError> {
    if !(sigma > 0.5 && sigma <= 1.0) {
        return Err(ZetaError::Config(format!("σ = {sigma} outside (1/2, 1]")));
    }
    if !(t >= 0.0) || t > 1e4 {
        return Err(ZetaError::Config(format!("T = {t} outside [0, 1e4]")));
    }
    let line = ZetaLine::new(sigma, t, ZetaConfig::default())?;
    let start = if sigma == 1.0 { 1.0 } else { 0.0 };
    fourth_moment_between(&line, start, t.max(start), tol)
}

/// Running sharp moment `∫_0^{T_i} |ζ(σ+it)|⁴ dt` at each point of an
/// increasing grid, computed with one sweep.
pub fn fourth_moment_curve(sigma: f64, grid: &[f64], tol: f64) -> Result<Vec<f64>, ZetaError> {
    if grid.windows(2).any(|w| w[1] < w[0]) || grid.first().is_some_and(|&g| g < 0.0) {
        return Err(ZetaError::Config("moment grid must be non-negative and increasing".into()));
    }
    let t_max = grid.last().copied().unwrap_or(0.0);
    let line = ZetaLine::new(sigma, t_max, ZetaConfig::default())?;
    let mut out = Vec::with_capacity(grid.len());
    let mut acc = 0.0;
    let mut prev = 0.0;
    for &t in grid {
        acc += fourth_moment_between(&line, prev, t, tol)?.value;
        out.push(acc);
        prev = t;
    }
    Ok(out)
}
