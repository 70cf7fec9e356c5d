use super::MomentError;

/// Least-squares slope of `log(running max |value|)` against `log T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthFit {
    pub slope: f64,
    /// Two standard errors of the slope.
    pub half_width: f64,
    pub intercept: f64,
}

/// Running maximum of `|value|`.
pub fn running_max(samples: &[(f64, f64)]) -> Vec<(f64, f64)> {
    samples
        .iter()
        .scan(0.0f64, |m, &(t, v)| {
            *m = m.max(v.abs());
            Some((t, *m))
        })
        .collect()
}

pub fn growth_exponent(samples: &[(f64, f64)]) -> Result<GrowthFit, MomentError> {
    if samples.len() < 16 {
        return Err(MomentError::Degenerate(format!("{} samples, need at least 16", samples.len())));
    }
    let (lo, hi) = (samples[0].0, samples[samples.len() - 1].0);
    if !(lo > 0.0 && hi >= 4.0 * lo) {
        return Err(MomentError::Degenerate(format!("T range [{lo}, {hi}] spans less than two octaves")));
    }
    let points: Vec<(f64, f64)> = running_max(samples).into_iter().map(|(t, m)| (t.ln(), m.ln())).collect();
    if points.iter().any(|&(_, y)| !y.is_finite()) {
        return Err(MomentError::Degenerate("running maximum vanishes".into()));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = points.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let se = (rss / (n - 2.0) / sxx).sqrt();
    Ok(GrowthFit { slope, half_width: 2.0 * se, intercept })
}

/// Sign changes counted inside one dyadic window `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DyadicWindow {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SignChangeReport {
    /// Consecutive sample pairs `(T_i, T_{i+1})` with opposite signs.
    pub intervals: Vec<(f64, f64)>,
    /// Windows `[T₀2^k, T₀2^{k+1}]` inside the sampled range, `T₀` the first sample.
    pub windows: Vec<DyadicWindow>,
}

impl SignChangeReport {
    /// Changes whose bracketing pair lies inside `[lo, hi]`.
    pub fn count_in(&self, lo: f64, hi: f64) -> usize {
        self.intervals.iter().filter(|&&(a, b)| a >= lo && b <= hi).count()
    }
}

/// Sign changes of an ordered `(T, E₂)` series.  The spacing should resolve
/// the slowest oscillation (step ≤ 1 at desk scale).
pub fn sign_change_scan(samples: &[(f64, f64)]) -> SignChangeReport {
    let intervals: Vec<(f64, f64)> = samples
        .windows(2)
        .filter(|w| w[0].1 * w[1].1 < 0.0)
        .map(|w| (w[0].0, w[1].0))
        .collect();
    let mut report = SignChangeReport { intervals, windows: Vec::new() };
    if let (Some(first), Some(last)) = (samples.first(), samples.last()) {
        let mut lo = first.0;
        while lo > 0.0 && 2.0 * lo <= last.0 {
            let count = report.count_in(lo, 2.0 * lo);
            report.windows.push(DyadicWindow { lo, hi: 2.0 * lo, count });
            lo *= 2.0;
        }
    }
    report
}

/// Trapezoid rule for `∫ |E₂|^p dT` over the sampled range.
pub fn error_moment_integral(samples: &[(f64, f64)], exponent: f64) -> f64 {
    samples
        .windows(2)
        .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1.abs().powf(exponent) + w[1].1.abs().powf(exponent)))
        .sum()
}

/// Pearson correlation of two equally long series.
pub fn pearson_correlation(x: &[f64], y: &[f64]) -> Result<f64, MomentError> {
    if x.len() != y.len() || x.len() < 3 {
        return Err(MomentError::Degenerate(format!("series of lengths {} and {}", x.len(), y.len())));
    }
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(MomentError::Degenerate("constant series".into()));
    }
    Ok(sxy / (sxx * syy).sqrt())
}
