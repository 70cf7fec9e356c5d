//! `lambda-compare`: direct quadrature against the saddle-point form.

use rayon::prelude::*;

use crate::config::RunConfig;
use crate::failure::{config_failure, info, warn, CmdResult};
use crate::table::{num, write_rows};
use zeta4::lambda::{lambda_direct, lambda_saddle, GaussianWeight, LambdaError};

/// Phase expansion order used for the saddle values.
pub const PHASE_ORDER: usize = 9;

pub const HEADER: [&str; 7] = ["r", "direct", "saddle", "rel_deviation", "regime", "bound", "note"];

#[derive(Debug, Clone, PartialEq)]
enum Row {
    Saddle { r: f64, direct: f64, saddle: f64 },
    /// Below the saddle threshold: only the size bound `T^{1/2-2τ}` applies.
    Fallback { r: f64, direct: Option<f64>, bound: f64 },
    Failed { r: f64, note: String },
}

impl Row {
    fn cells(&self) -> CmdResult<Vec<String>> {
        Ok(match self {
            Self::Saddle { r, direct, saddle } => vec![
                num(*r, "r")?,
                num(*direct, "direct kernel")?,
                num(*saddle, "saddle kernel")?,
                num(deviation(*direct, *saddle), "deviation")?,
                "saddle".into(),
                String::new(),
                String::new(),
            ],
            Self::Fallback { r, direct, bound } => vec![
                num(*r, "r")?,
                direct.map(|d| num(d, "direct kernel")).transpose()?.unwrap_or_default(),
                String::new(),
                String::new(),
                "fallback".into(),
                num(*bound, "bound")?,
                "below (log T) threshold".into(),
            ],
            Self::Failed { r, note } => {
                vec![num(*r, "r")?, String::new(), String::new(), String::new(), "error".into(), String::new(), note.clone()]
            }
        })
    }
}

fn deviation(direct: f64, saddle: f64) -> f64 {
    ((saddle - direct) / direct).abs()
}

fn evaluate(r: f64, tau: f64, w: &GaussianWeight, tol: f64) -> Row {
    let direct = lambda_direct(r, tau, w, tol).map(|v| v.value);
    match (lambda_saddle(r, tau, w, PHASE_ORDER), direct) {
        (Ok(s), Ok(d)) => Row::Saddle { r, direct: d, saddle: s.value },
        (Err(LambdaError::Regime(_)), d) => {
            Row::Fallback { r, direct: d.ok(), bound: w.center().powf(0.5 - 2.0 * tau) }
        }
        (Err(e), _) | (Ok(_), Err(e)) => Row::Failed { r, note: e.to_string() },
    }
}

/// Whether the deviations decrease along increasing `r`; `None` with fewer
/// than two saddle rows.
fn monotone_trend(rows: &[Row]) -> Option<bool> {
    let mut devs: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|row| match row {
            Row::Saddle { r, direct, saddle } => Some((*r, deviation(*direct, *saddle))),
            _ => None,
        })
        .collect();
    if devs.len() < 2 {
        return None;
    }
    devs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Some(devs.windows(2).all(|p| p[1].1 < p[0].1))
}

pub fn lambda_compare(cfg: &RunConfig) -> CmdResult<()> {
    if !(cfg.sigma > 0.5 && cfg.sigma < 1.0) {
        return Err(config_failure(format!("tau (--sigma) = {} outside (1/2, 1)", cfg.sigma)));
    }
    if cfg.r_values.is_empty() {
        return Err(config_failure("lambda-compare needs --r"));
    }
    let t = cfg.t_to;
    let rule = cfg.width.ok_or_else(|| config_failure("lambda-compare needs --g or --g-exp"))?;
    let w = GaussianWeight::new(t, rule.at(t))?;
    let rows: Vec<Row> = cfg.r_values.par_iter().map(|&r| evaluate(r, cfg.sigma, &w, cfg.tol)).collect();
    let mut cells = rows.iter().map(Row::cells).collect::<CmdResult<Vec<_>>>()?;
    for row in &rows {
        if let Row::Failed { r, note } = row {
            warn("row_failed", &[("r", r.to_string()), ("reason", note.clone())]);
        }
    }
    if let Some(monotone) = monotone_trend(&rows) {
        let mut summary = vec![String::new(); HEADER.len()];
        summary[4] = "summary".into();
        summary[6] = format!("monotone_decreasing={monotone}");
        cells.push(summary);
        if monotone {
            info("trend", &[("monotone_decreasing", "true".into())]);
        } else {
            warn("trend", &[("monotone_decreasing", "false".into())]);
        }
    }
    write_rows(&cfg.out, &HEADER, &cells)
}
