//! Static SVG plots of a numeric table.  Plots read tables only; they never
//! write numeric output.

use std::path::Path;

use anyhow::{bail, Context};
use plotters::prelude::*;

use crate::config::RunConfig;
use crate::failure::{info, warn, Classify, CmdResult};
use crate::table::read_numeric_table;
use zeta4::moments::{growth_exponent, running_max};

const SIZE: (u32, u32) = (900, 600);
const TEXT_COLUMNS: [&str; 4] = ["saddle_form", "regime", "note", "label"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    Series,
    LogLog,
    Scatter,
}

impl PlotKind {
    pub fn parse(s: &str) -> anyhow::Result<Self> {
        Ok(match s {
            "series" => Self::Series,
            "loglog" => Self::LogLog,
            "scatter" => Self::Scatter,
            other => bail!("unknown plot kind '{other}' (series, loglog or scatter)"),
        })
    }
}

/// Padded `[min, max]` of a set of values, or `fallback` when empty.
fn span(values: impl Iterator<Item = f64>, fallback: (f64, f64)) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return fallback;
    }
    if hi > lo {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    } else {
        let pad = if lo == 0.0 { 1.0 } else { 0.5 * lo.abs() };
        (lo - pad, hi + pad)
    }
}

fn draw_linear(path: &Path, title: &str, x: &str, y: &str, pts: &[(f64, f64)], kind: PlotKind) -> anyhow::Result<()> {
    let root = SVGBackend::new(path, SIZE).into_drawing_area();
    root.fill(&WHITE)?;
    let xr = span(pts.iter().map(|p| p.0), (0.0, 1.0));
    let yr = span(pts.iter().map(|p| p.1).chain((kind == PlotKind::Series).then_some(0.0)), (-1.0, 1.0));
    let mut chart = ChartBuilder::on(&root)
        .caption(title, ("sans-serif", 22))
        .margin(15)
        .x_label_area_size(40)
        .y_label_area_size(70)
        .build_cartesian_2d(xr.0..xr.1, yr.0..yr.1)?;
    chart.configure_mesh().x_desc(x).y_desc(y).draw()?;
    match kind {
        PlotKind::Series => {
            chart.draw_series(LineSeries::new([(xr.0, 0.0), (xr.1, 0.0)], BLACK.mix(0.5)))?;
            chart.draw_series(LineSeries::new(pts.iter().copied(), &BLUE))?;
        }
        _ => {
            chart.draw_series(pts.iter().map(|&p| Circle::new(p, 2, BLUE.filled())))?;
        }
    }
    root.present()?;
    Ok(())
}

fn draw_loglog(path: &Path, title: &str, x: &str, y: &str, pts: &[(f64, f64)], note: &str) -> anyhow::Result<()> {
    let root = SVGBackend::new(path, SIZE).into_drawing_area();
    root.fill(&WHITE)?;
    let positive: Vec<(f64, f64)> = running_max(pts).into_iter().filter(|p| p.0 > 0.0 && p.1 > 0.0).collect();
    let bounds = |v: Vec<f64>| {
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if lo.is_finite() {
            (lo / 1.2, hi * 1.2)
        } else {
            (1.0, 10.0)
        }
    };
    let xr = bounds(positive.iter().map(|p| p.0).collect());
    let yr = bounds(positive.iter().map(|p| p.1).collect());
    let mut chart = ChartBuilder::on(&root)
        .caption(title, ("sans-serif", 22))
        .margin(15)
        .x_label_area_size(40)
        .y_label_area_size(70)
        .build_cartesian_2d((xr.0..xr.1).log_scale(), (yr.0..yr.1).log_scale())?;
    chart.configure_mesh().x_desc(x).y_desc(format!("running max |{y}|")).draw()?;
    chart.draw_series(LineSeries::new(positive.iter().copied(), &BLUE))?;
    root.draw(&Text::new(note.to_string(), (100, 60), ("sans-serif", 18).into_font()))?;
    root.present()?;
    Ok(())
}

pub fn plot(cfg: &RunConfig) -> CmdResult<()> {
    let input = cfg.input.as_ref().ok_or_else(|| crate::failure::config_failure("plot needs --input"))?;
    let kind = PlotKind::parse(cfg.kind.as_deref().unwrap_or("series")).config()?;
    let x = cfg.x_column.as_deref().unwrap_or("T");
    let y = cfg.y_column.as_deref().unwrap_or("E2");
    let table = read_numeric_table(input, &TEXT_COLUMNS).config()?;
    let mut pts = table.pairs(x, y).config()?;
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let title = format!("{y} against {x}");
    match kind {
        PlotKind::LogLog => {
            let note = match growth_exponent(&pts) {
                Ok(g) => {
                    info("growth", &[("slope", g.slope.to_string()), ("half_width", g.half_width.to_string())]);
                    format!("slope = {} ± {}", g.slope, g.half_width)
                }
                Err(e) => {
                    warn("growth_unavailable", &[("reason", e.to_string())]);
                    "slope = n/a".to_string()
                }
            };
            draw_loglog(&cfg.out, &title, x, y, &pts, &note)
        }
        _ => draw_linear(&cfg.out, &title, x, y, &pts, kind),
    }
    .with_context(|| format!("rendering {}", cfg.out.display()))
    .numeric()
}
