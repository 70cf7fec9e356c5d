//! `moment`, `error-term` and `fit`.

use std::fmt::Write as _;
use std::fs::File;

use anyhow::Context;
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::failure::{config_failure, info, warn, Classify, CmdResult};
use crate::table::{create, read_coefficients, write_coefficients, write_text};
use zeta4::moments::{
    fit_secondary_coefficients, growth_exponent, main_term_for, read_samples, sharp_moment_series,
    sign_change_scan, write_samples, MomentParameters, MomentSample, SecondaryCoefficients,
};
use zeta4::spectral::{load_spectral_dir, spectral_sum_s};
use zeta4::zeta::sharp_fourth_moment;

/// Hecke table length used when loading a dataset.
pub const HECKE_N_MAX: usize = 150;

fn check_sigma(sigma: f64) -> CmdResult<()> {
    if sigma > 0.5 && sigma <= 1.0 {
        Ok(())
    } else {
        Err(config_failure(format!("sigma = {sigma} outside (1/2, 1]")))
    }
}

/// `(T, ∫|ζ|⁴)` along an increasing grid.  At σ = 1 every point is an
/// independent integral over `[1, T]`.
pub fn sharp_series(sigma: f64, grid: &[f64], tol: f64) -> CmdResult<Vec<(f64, f64)>> {
    if sigma == 1.0 {
        grid.par_iter()
            .map(|&t| Ok((t, sharp_fourth_moment(sigma, t, tol).map_err(zeta4::moments::MomentError::from)?.value)))
            .collect()
    } else {
        Ok(sharp_moment_series(sigma, grid, tol)?)
    }
}

fn load_coefficients(cfg: &RunConfig) -> CmdResult<Option<SecondaryCoefficients>> {
    let Some(path) = &cfg.coeffs else { return Ok(None) };
    let c = read_coefficients(path).config()?;
    if (c.sigma - cfg.sigma).abs() > 1e-12 {
        return Err(config_failure(format!("coefficients in {} are for sigma = {}, not {}", path.display(), c.sigma, cfg.sigma)));
    }
    Ok(Some(c))
}

pub fn moment(cfg: &RunConfig) -> CmdResult<()> {
    check_sigma(cfg.sigma)?;
    let grid = cfg.grid();
    let coeffs = load_coefficients(cfg)?.unwrap_or_else(|| SecondaryCoefficients::zero(cfg.sigma));
    let sharp = sharp_series(cfg.sigma, &grid, cfg.tol)?;
    let mut samples = sharp
        .iter()
        .map(|&(t, s)| Ok(MomentSample::new(t, cfg.sigma, s, main_term_for(t, cfg.sigma, &coeffs)?)))
        .collect::<CmdResult<Vec<_>>>()?;
    if let Some(rule) = cfg.width {
        for s in &mut samples {
            s.g = Some(rule.at(s.t));
        }
    }
    if let (Some(dir), Some(rule)) = (&cfg.dataset, cfg.width) {
        let ds = load_spectral_dir(dir, HECKE_N_MAX)?;
        let predictions = samples
            .par_iter()
            .map(|s| {
                let p = MomentParameters::new(cfg.sigma, s.t, rule.at(s.t))?;
                Ok(spectral_sum_s(&p, &ds)?.value)
            })
            .collect::<CmdResult<Vec<f64>>>()?;
        for (s, v) in samples.iter_mut().zip(predictions) {
            s.spectral_prediction = Some(v);
        }
    }
    write_moment_table(cfg, &samples)?;
    if let Some(last) = samples.last() {
        info(
            "moment",
            &[("rows", samples.len().to_string()), ("T", last.t.to_string()), ("mean", (last.sharp_moment / last.t).to_string())],
        );
    }
    Ok(())
}

fn write_moment_table(cfg: &RunConfig, samples: &[MomentSample]) -> CmdResult<()> {
    if let Some(bad) = samples.iter().find(|s| {
        ![s.sharp_moment, s.main_term, s.e2].iter().all(|x| x.is_finite())
            || s.g.is_some_and(|g| !g.is_finite())
            || s.spectral_prediction.is_some_and(|v| !v.is_finite())
    }) {
        return Err(anyhow::anyhow!("non-finite value in the row at T = {}", bad.t)).numeric();
    }
    let mut w = create(&cfg.out)?;
    write_samples(&mut w, samples)?;
    std::io::Write::flush(&mut w).config()
}

/// Fit window from the config, defaulting to `default`.
fn fit_window(cfg: &RunConfig, default: (f64, f64)) -> CmdResult<(f64, f64)> {
    let window = (cfg.fit_from.unwrap_or(default.0), cfg.fit_to.unwrap_or(default.1));
    if !(window.0 < window.1) {
        return Err(config_failure(format!("fit window [{}, {}] is empty", window.0, window.1)));
    }
    Ok(window)
}

/// Sharp moments for the output rows plus those needed by the fit window.
/// Returns `(all points, output points)`.
fn acquire(cfg: &RunConfig) -> CmdResult<(Vec<(f64, f64)>, Vec<(f64, f64)>)> {
    if let Some(path) = &cfg.input {
        let file = File::open(path).with_context(|| format!("opening {}", path.display())).config()?;
        let rows = read_samples(file)?;
        if let Some(r) = rows.iter().find(|r| (r.sigma - cfg.sigma).abs() > 1e-12) {
            return Err(config_failure(format!("input row at T = {} has sigma = {}, expected {}", r.t, r.sigma, cfg.sigma)));
        }
        let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.t, r.sharp_moment)).collect();
        return Ok((pts.clone(), pts));
    }
    let grid = cfg.grid();
    let mut all = grid.clone();
    if let (Some(lo), Some(hi)) = (cfg.fit_from, cfg.fit_to) {
        let step = cfg.fit_step.unwrap_or(cfg.t_step);
        if !(step > 0.0) {
            return Err(config_failure(format!("fit-step must be positive, got {step}")));
        }
        let n = ((hi - lo) / step + 1e-9).floor() as usize;
        all.extend((0..=n).map(|k| lo + k as f64 * step));
    }
    all.sort_by(f64::total_cmp);
    all.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    let pts = sharp_series(cfg.sigma, &all, cfg.tol)?;
    let out = pts.iter().copied().filter(|(t, _)| grid.iter().any(|g| (g - t).abs() < 1e-9)).collect();
    Ok((pts, out))
}

fn fitted(cfg: &RunConfig, all: &[(f64, f64)], out: &[(f64, f64)]) -> CmdResult<SecondaryCoefficients> {
    let range = |v: &[(f64, f64)]| (v.first().map_or(0.0, |p| p.0), v.last().map_or(0.0, |p| p.0));
    let (lo, hi) = fit_window(cfg, range(out))?;
    let window: Vec<(f64, f64)> = all.iter().copied().filter(|&(t, _)| t >= lo - 1e-9 && t <= hi + 1e-9).collect();
    let c = fit_secondary_coefficients(&window, cfg.sigma)?;
    info(
        "fit",
        &[
            ("sigma", cfg.sigma.to_string()),
            ("a0", c.a[0].to_string()),
            ("a1", c.a[1].to_string()),
            ("a2", c.a[2].to_string()),
            ("residual", c.fit_residual.to_string()),
        ],
    );
    Ok(c)
}

pub fn fit(cfg: &RunConfig) -> CmdResult<()> {
    check_sigma(cfg.sigma)?;
    let (all, out) = acquire(cfg)?;
    let c = fitted(cfg, &all, &out)?;
    write_coefficients(&cfg.out, &c)
}

pub fn error_term(cfg: &RunConfig) -> CmdResult<()> {
    check_sigma(cfg.sigma)?;
    let (all, out) = acquire(cfg)?;
    let coeffs = match load_coefficients(cfg)? {
        Some(c) => c,
        None => fitted(cfg, &all, &out)?,
    };
    let samples = out
        .iter()
        .map(|&(t, s)| Ok(MomentSample::new(t, cfg.sigma, s, main_term_for(t, cfg.sigma, &coeffs)?)))
        .collect::<CmdResult<Vec<_>>>()?;
    write_moment_table(cfg, &samples)?;
    write_coefficients(&cfg.companion("coeffs.csv"), &coeffs)?;
    write_text(&cfg.companion("summary"), &summary(cfg, &coeffs, &samples))
}

/// `key = value` summary: fit, growth exponent of the running max and the
/// dyadic sign-change counts.
fn summary(cfg: &RunConfig, c: &SecondaryCoefficients, samples: &[MomentSample]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "sigma = {}", cfg.sigma);
    let _ = writeln!(s, "fit_from = {}", c.fit_window.0);
    let _ = writeln!(s, "fit_to = {}", c.fit_window.1);
    let _ = writeln!(s, "fit_residual = {}", c.fit_residual);
    let _ = writeln!(s, "rows = {}", samples.len());
    let series: Vec<(f64, f64)> = samples.iter().map(|x| (x.t, x.e2)).collect();
    match growth_exponent(&series) {
        Ok(g) => {
            let _ = writeln!(s, "growth_slope = {}", g.slope);
            let _ = writeln!(s, "growth_half_width = {}", g.half_width);
            let _ = writeln!(s, "growth_reference = {}", 1.5 - 2.0 * cfg.sigma);
            info("growth", &[("slope", g.slope.to_string()), ("half_width", g.half_width.to_string())]);
        }
        Err(e) => {
            let _ = writeln!(s, "growth_slope = n/a");
            warn("growth_unavailable", &[("reason", e.to_string())]);
        }
    }
    let scan = sign_change_scan(&series);
    let _ = writeln!(s, "sign_changes = {}", scan.intervals.len());
    for w in &scan.windows {
        let _ = writeln!(s, "sign_changes_{}_{} = {}", w.lo, w.hi, w.count);
    }
    s
}
