//! `spectral`: the spectral sum over a T-grid, the Theorem-2 ratio table and
//! the nonvanishing report, with an optional correlation against E₂.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::config::{RunConfig, WidthRule};
use crate::failure::{config_failure, info, warn, Classify, CmdResult};
use crate::moment_cmd::HECKE_N_MAX;
use crate::table::{num, read_numeric_table, write_rows, write_text};
use zeta4::moments::{detrended_smoothed_error, pearson_correlation, MomentParameters};
use zeta4::spectral::{
    load_spectral_dir, nonvanishing_fraction, spectral_sum_with, theorem2_partial_sums, AverageVariant, SaddleForm,
    SpectralDataset,
};

pub const SUM_HEADER: [&str; 9] = ["T", "sigma", "G", "S", "cutoff", "terms", "coverage", "saddle_form", "E2"];
pub const THEOREM2_HEADER: [&str; 8] = [
    "K",
    "sum_central_square",
    "main_central_square",
    "ratio_central_square",
    "sum_square_shifted",
    "main_square_shifted",
    "ratio_square_shifted",
    "nonvanishing_fraction",
];

const CAVEAT: &str = "ratios are finite-K partial sums; convergence as K grows is not observable at this scale";

/// Default K sweep: multiples of 5 from 10 up to the largest κ in the data.
fn default_k_values(ds: &SpectralDataset) -> Vec<f64> {
    (2..).map(|i| 5.0 * i as f64).take_while(|&k| k <= ds.max_kappa()).collect()
}

fn theorem2_rows(ds: &SpectralDataset, tau: f64, ks: &[f64]) -> CmdResult<Vec<Vec<String>>> {
    ks.par_iter()
        .map(|&k| {
            let (a, ma) = theorem2_partial_sums(ds, tau, k, AverageVariant::CentralTimesSquare)?;
            let (b, mb) = theorem2_partial_sums(ds, tau, k, AverageVariant::SquareTimesShifted)?;
            let frac = nonvanishing_fraction(ds, tau, k)?;
            [k, a, ma, a / ma, b, mb, b / mb, frac]
                .iter()
                .map(|&x| num(x, "Theorem-2 entry"))
                .collect::<CmdResult<Vec<_>>>()
        })
        .collect()
}

/// `(T, E₂)` to correlate against, if requested.
fn error_series(cfg: &RunConfig, grid: &[f64]) -> CmdResult<Option<Vec<(f64, f64)>>> {
    if cfg.smoothed_error {
        let Some(WidthRule::Fixed(g)) = cfg.width else {
            return Err(config_failure("--smoothed-error needs a fixed --g"));
        };
        return Ok(Some(detrended_smoothed_error(cfg.sigma, g, grid, cfg.tol)?));
    }
    let Some(path) = &cfg.input else { return Ok(None) };
    let table = read_numeric_table(path, &[]).config()?;
    let pairs = table.pairs("T", "E2").config()?;
    Ok(Some(grid.iter().filter_map(|&t| pairs.iter().find(|p| (p.0 - t).abs() < 1e-9).copied()).collect()))
}

pub fn spectral(cfg: &RunConfig) -> CmdResult<()> {
    let dir = cfg.dataset.as_ref().ok_or_else(|| config_failure("spectral needs --dataset (a directory with forms.csv and hecke.csv)"))?;
    let rule = cfg.width.ok_or_else(|| config_failure("spectral needs --g or --g-exp"))?;
    if !(cfg.sigma > 0.5 && cfg.sigma < 1.0) {
        return Err(config_failure(format!("sigma = {} outside (1/2, 1)", cfg.sigma)));
    }
    let ds = load_spectral_dir(dir, HECKE_N_MAX)?;
    let form = if cfg.literal_saddle { SaddleForm::Literal } else { SaddleForm::Derived };
    let grid = cfg.grid();

    let sums = grid
        .par_iter()
        .map(|&t| {
            let p = MomentParameters::new(cfg.sigma, t, rule.at(t))?;
            Ok(spectral_sum_with(&p, &ds, form)?)
        })
        .collect::<CmdResult<Vec<_>>>()?;
    let errors = error_series(cfg, &grid)?;

    let mut rows = Vec::with_capacity(grid.len());
    for (&t, s) in grid.iter().zip(&sums) {
        if s.coverage < 0.999 {
            warn("coverage_shortfall", &[("T", t.to_string()), ("coverage", s.coverage.to_string())]);
        }
        let e2 = errors.as_ref().and_then(|e| e.iter().find(|p| p.0 == t)).map(|p| num(p.1, "E2")).transpose()?;
        rows.push(vec![
            num(t, "T")?,
            num(cfg.sigma, "sigma")?,
            num(rule.at(t), "G")?,
            num(s.value, "S")?,
            num(s.cutoff, "cutoff")?,
            s.terms.to_string(),
            num(s.coverage, "coverage")?,
            s.saddle_form.label().to_string(),
            e2.unwrap_or_default(),
        ]);
    }
    write_rows(&cfg.out, &SUM_HEADER, &rows)?;

    let ks = if cfg.k_values.is_empty() { default_k_values(&ds) } else { cfg.k_values.clone() };
    write_rows(&cfg.companion("theorem2.csv"), &THEOREM2_HEADER, &theorem2_rows(&ds, cfg.sigma, &ks)?)?;

    let mut summary = String::new();
    let _ = writeln!(summary, "forms = {}", ds.records.len());
    let _ = writeln!(summary, "max_kappa = {}", ds.max_kappa());
    let _ = writeln!(summary, "theorem2_caveat = {CAVEAT}");
    if !ds.is_empty() {
        let frac = nonvanishing_fraction(&ds, cfg.sigma, ds.max_kappa())?;
        let _ = writeln!(summary, "nonvanishing_fraction = {frac}");
    }
    if let Some(e) = &errors {
        let s: Vec<f64> = e.iter().map(|p| sums[grid.iter().position(|&t| t == p.0).unwrap_or(0)].value).collect();
        let x: Vec<f64> = e.iter().map(|p| p.1).collect();
        let _ = writeln!(summary, "correlation_points = {}", x.len());
        match pearson_correlation(&x, &s) {
            Ok(r) => {
                let _ = writeln!(summary, "pearson = {r}");
                info("correlation", &[("pearson", r.to_string()), ("points", x.len().to_string())]);
            }
            Err(e) => {
                let _ = writeln!(summary, "pearson = n/a");
                warn("correlation_unavailable", &[("reason", e.to_string())]);
            }
        }
    }
    write_text(&cfg.companion("summary"), &summary)
}
