use std::f64::consts::PI;

use super::{MaassFormRecord, Parity, SpectralError};
use crate::numerics::{integrate_adaptive, log_gamma, NumericsError};
use crate::C64;

/// `C` in `μ = C log K` used when `H_j(τ)` has to be computed on demand.
pub const DEFAULT_AFE_C: f64 = 4.0;

/// Number of Hecke terms `f <= 3K` (at least one).
fn term_count(k: f64) -> usize {
    ((3.0 * k).floor() as usize).max(1)
}

fn hecke_terms(rec: &MaassFormRecord, k: f64) -> Result<usize, SpectralError> {
    let n = term_count(k);
    if n > rec.hecke.n_max() {
        return Err(SpectralError::InsufficientData(format!(
            "record {} needs t(n) up to {n} for K = {k}, table stops at {}",
            rec.index,
            rec.hecke.n_max()
        )));
    }
    Ok(n)
}

/// `Σ_{f <= 3K} t_j(f) f^{-τ} exp(-(f/K)^μ)`; the `f = 1` term is always kept.
///
/// With the usual choice `μ = C log K` the exponent is negative once `K < 1`,
/// and the sum then tends to `t_j(1) = 1` as `K → 0⁺`.
pub fn hecke_series_smoothed(rec: &MaassFormRecord, tau: f64, k: f64, mu: f64) -> Result<f64, SpectralError> {
    if !(k > 0.0 && k.is_finite() && mu.is_finite() && mu != 0.0) {
        return Err(SpectralError::Precondition(format!("need K > 0 and finite μ ≠ 0, got K = {k}, μ = {mu}")));
    }
    let n = hecke_terms(rec, k)?;
    Ok((1..=n)
        .map(|f| {
            let x = f as f64;
            rec.hecke.get(f).unwrap_or(0.0) * x.powf(-tau) * (-(x / k).powf(mu)).exp()
        })
        .sum())
}

fn check_regime(rec: &MaassFormRecord, tau: f64, k: f64) -> Result<(), SpectralError> {
    if !(tau > 0.5 && tau < 1.0) {
        return Err(SpectralError::Precondition(format!("τ = {tau} outside (1/2, 1)")));
    }
    // |κ_j - K| <= G log K, with G = √K standing in for the smoothing width
    if !(k >= 3.0 && (rec.kappa - k).abs() <= k.sqrt() * k.ln()) {
        return Err(SpectralError::Regime(format!("κ = {} too far from K = {k}", rec.kappa)));
    }
    Ok(())
}

/// `log(cosh(πκ) - cos(πz))`, scaled so that neither term overflows.
fn log_bracket(kappa: f64, z: C64) -> C64 {
    let scale = PI * kappa.max(z.im.abs());
    let e = |x: C64| (x - scale).exp();
    let i_pi_z = C64::new(0.0, PI) * z;
    let scaled = 0.5 * (e(C64::new(PI * kappa, 0.0)) + e(C64::new(-PI * kappa, 0.0))) - 0.5 * (e(i_pi_z) + e(-i_pi_z));
    scaled.ln() + scale
}

/// The correction integral along `Re w = -1/μ`, `|Im w| <= μ²`, before
/// taking the real part.
pub(crate) fn afe_correction_complex(
    rec: &MaassFormRecord,
    tau: f64,
    k: f64,
    mu: f64,
    f: u64,
) -> Result<C64, SpectralError> {
    check_regime(rec, tau, k)?;
    if !(mu > 0.0 && f >= 1) {
        return Err(SpectralError::Precondition(format!("need μ > 0 and f >= 1, got μ = {mu}, f = {f}")));
    }
    let kappa = rec.kappa;
    let log_x = (4.0 * PI * PI * f as f64 * k).ln();
    let integrand = |t: f64| -> Result<C64, NumericsError> {
        let w = C64::new(-1.0 / mu, t);
        let a = C64::new(1.0 - tau, 0.0) - w;
        let gammas = log_gamma(a + C64::new(0.0, kappa))? + log_gamma(a - C64::new(0.0, kappa))? + log_gamma(w / mu)?;
        Ok((w * log_x + gammas + log_bracket(kappa, w + tau)).exp())
    };
    let half = mu * mu;
    let panels = half.ceil() as usize;
    let step = half / panels as f64;
    let mut total = C64::new(0.0, 0.0);
    for side in [-1.0, 1.0] {
        for i in 0..panels {
            let (a, b) = (side * step * i as f64, side * step * (i + 1) as f64);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let failure = std::cell::Cell::new(None);
            let g = |t: f64| match integrand(t) {
                Ok(v) => v,
                Err(e) => {
                    failure.set(Some(e));
                    C64::new(f64::NAN, 0.0)
                }
            };
            let piece = integrate_adaptive(g, lo, hi, 1e-12);
            if let Some(e) = failure.take() {
                return Err(e.into());
            }
            total += piece?.value;
        }
    }
    // (1/(πiμ)) ∫ ... dw with dw = i dt
    Ok(total / ((2.0 * PI).powf(2.0 * (1.0 - tau)) * PI * mu))
}

/// `R_j^{(1)}(fK)`: the truncated correction integral of the approximate
/// functional equation.  Its integrand is conjugate symmetric, so the value
/// is real.
pub fn afe_correction(rec: &MaassFormRecord, tau: f64, k: f64, mu: f64, f: u64) -> Result<f64, SpectralError> {
    Ok(afe_correction_complex(rec, tau, k, mu, f)?.re)
}

/// `H_j(τ)` for an even form from the approximate functional equation with
/// `μ = C log K`.
pub fn hecke_value_afe(rec: &MaassFormRecord, tau: f64, k: f64, c: f64) -> Result<f64, SpectralError> {
    if rec.parity == Parity::Odd {
        return Err(SpectralError::Parity(rec.index));
    }
    check_regime(rec, tau, k)?;
    if !(c > 0.0) {
        return Err(SpectralError::Precondition(format!("C = {c} must be positive")));
    }
    let mu = c * k.ln();
    let smoothed = hecke_series_smoothed(rec, tau, k, mu)?;
    let n = hecke_terms(rec, k)?;
    let mut correction = 0.0;
    for f in 1..=n {
        let t = rec.hecke.get(f).unwrap_or(0.0);
        if t != 0.0 {
            correction += t * (f as f64).powf(tau - 1.0) * afe_correction(rec, tau, k, mu, f as u64)?;
        }
    }
    Ok(smoothed - correction)
}

/// `H_j(x)`: the shipped value if there is one, otherwise the approximate
/// functional equation at `K = κ_j` (even forms only).
pub fn hecke_value(rec: &MaassFormRecord, x: f64) -> Result<f64, SpectralError> {
    if let Some(v) = rec.cached_value(x) {
        return Ok(v);
    }
    match rec.parity {
        Parity::Even if x > 0.5 && x < 1.0 => hecke_value_afe(rec, x, rec.kappa.max(3.0), DEFAULT_AFE_C),
        _ => Err(SpectralError::MissingValue { record: rec.index, at: x }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::parse_spectral_dataset;

    // t(p) = 2 cos θ_p; prime powers follow from the Hecke recursion.
    fn toy(kappa: f64, parity: i32, central: f64, n_max: usize) -> MaassFormRecord {
        let mut hecke = String::from("j,n,t\n");
        for p in (2..=n_max).filter(|&p| (2..p).all(|d| p % d != 0)) {
            hecke.push_str(&format!("1,{p},{:.17e}\n", 2.0 * (0.4 + 1.3 * p as f64).cos()));
        }
        let forms = format!("j,kappa,epsilon,alpha,H_half\n1,{kappa},{parity},1.0,{central}\n");
        parse_spectral_dataset(&forms, &hecke, n_max).unwrap().records.remove(0)
    }

    #[test]
    fn bracket_matches_direct_form() {
        for (kappa, z) in [(9.5, C64::new(0.5, 3.0)), (20.0, C64::new(0.6, -25.0)), (3.0, C64::new(0.7, 0.0))] {
            let direct = C64::new((PI * kappa).cosh(), 0.0) - (PI * z).cos();
            let got = log_bracket(kappa, z).exp();
            assert!((got - direct).norm() < 1e-13 * direct.norm(), "{got} vs {direct}");
        }
        assert!(log_bracket(40.0, C64::new(0.6, -300.0)).is_finite());
    }

    #[test]
    fn small_k_keeps_only_the_first_term() {
        let rec = toy(9.5, 1, 1.0, 10);
        let k = 0.01;
        let v = hecke_series_smoothed(&rec, 0.6, k, 2.0 * k.ln()).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn absolutely_convergent_limit() {
        let rec = toy(9.5, 1, 1.0, 3000);
        let tau = 2.0;
        let exact: f64 = (1..=3000).map(|f| rec.hecke.get(f).unwrap() * (f as f64).powf(-tau)).sum();
        let mut prev_gap = f64::INFINITY;
        for k in [50.0, 200.0, 1000.0] {
            let v = hecke_series_smoothed(&rec, tau, k, 2.0 * f64::ln(k)).unwrap();
            // |t(n)| <= d(n) <= 2√n bounds the neglected part
            let tail: f64 = 2.0 * ((k / 2.0) as usize..=3000).map(|f| (f as f64).powf(0.5 - tau)).sum::<f64>();
            let gap = (v - exact).abs();
            assert!(gap <= tail, "K = {k}: {gap} > {tail}");
            assert!(gap < prev_gap);
            prev_gap = gap;
        }
    }

    #[test]
    fn insufficient_table() {
        let rec = toy(9.5, 1, 1.0, 20);
        assert!(matches!(hecke_series_smoothed(&rec, 0.6, 10.0, 4.6), Err(SpectralError::InsufficientData(_))));
    }

    #[test]
    fn correction_is_real_and_bounded() {
        let rec = toy(20.0, 1, 1.0, 80);
        let (tau, k) = (0.6, 20.0f64);
        let mu = 2.0 * k.ln();
        let z = afe_correction_complex(&rec, tau, k, mu, 1).unwrap();
        assert!(z.im.abs() < 1e-10 * z.re.abs(), "{z}");
        let bound = 10.0 * k.powf(1.0 - 2.0 * tau) * (4.0 * PI * PI * k / (k * k)).powf(-mu / 2.0);
        assert!(z.re.abs() < bound, "{} vs {bound}", z.re);
    }

    #[test]
    fn correction_negligible_far_out() {
        let rec = toy(20.0, 1, 1.0, 80);
        let (tau, k) = (0.6, 20.0f64);
        let mu = 4.0 * k.ln();
        let main = hecke_series_smoothed(&rec, tau, k, mu).unwrap();
        // beyond f K = K² e²/(4π²) the corrections fall off quickly in f
        let r: Vec<f64> = [4u64, 10, 30].iter().map(|&f| afe_correction(&rec, tau, k, mu, f).unwrap().abs()).collect();
        assert!(r[0] > r[1] && r[1] > r[2], "{r:?}");
        assert!(r[0] < 1e-4 * main.abs() && r[2] < 1e-8 * main.abs(), "{r:?} vs {main}");
    }

    #[test]
    fn parity_and_regime_errors() {
        let odd = toy(20.0, -1, 0.0, 80);
        assert!(matches!(hecke_value_afe(&odd, 0.6, 20.0, 2.0), Err(SpectralError::Parity(1))));
        let even = toy(20.0, 1, 1.0, 300);
        assert!(matches!(hecke_value_afe(&even, 0.6, 90.0, 2.0), Err(SpectralError::Regime(_))));
        assert!(matches!(hecke_value(&odd, 0.7), Err(SpectralError::MissingValue { .. })));
    }
}
