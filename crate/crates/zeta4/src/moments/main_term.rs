use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use super::MomentError;
use crate::zeta::{zeta, ZetaConfig};
use crate::C64;

/// The generic main term is refused within this distance of σ = 3/4.
pub const THREE_QUARTERS_GAP: f64 = 1e-3;

/// ζ on the real axis.
pub fn real_zeta(x: f64) -> Result<f64, MomentError> {
    Ok(zeta(C64::new(x, 0.0), &ZetaConfig::default())?.re)
}

/// Fitted coefficients of `T^{2-2σ}(a₀ + a₁ log T + a₂ log² T)`.  At σ = 3/4
/// the same triple holds the `A_j` of the `T^{1/2}` term.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondaryCoefficients {
    pub sigma: f64,
    pub a: [f64; 3],
    pub std_errors: [f64; 3],
    pub fit_window: (f64, f64),
    /// Root mean square of `sharp - main` over the fit window.
    pub fit_residual: f64,
}

impl SecondaryCoefficients {
    /// All-zero coefficients (no fit).
    pub fn zero(sigma: f64) -> Self {
        Self { sigma, a: [0.0; 3], std_errors: [0.0; 3], fit_window: (0.0, 0.0), fit_residual: 0.0 }
    }

    fn poly(&self, t: f64) -> f64 {
        let l = t.ln();
        self.a[0] + self.a[1] * l + self.a[2] * l * l
    }
}

fn is_three_quarters(sigma: f64) -> bool {
    (sigma - 0.75).abs() < THREE_QUARTERS_GAP
}

/// The two explicit terms `ζ⁴(2σ)/ζ(4σ)·T + T/(3-4σ)·(T/2π)^{2-4σ}·ζ⁴(2-2σ)/ζ(4-4σ)`,
/// or `ζ⁴(3/2)/ζ(3)·T` at σ = 3/4.  Also defined at the boundary σ = 1.
pub fn leading_terms(t: f64, sigma: f64) -> Result<f64, MomentError> {
    if is_three_quarters(sigma) {
        return Ok(real_zeta(1.5)?.powi(4) / real_zeta(3.0)? * t);
    }
    if !(sigma > 0.5 && sigma <= 1.0) {
        return Err(MomentError::Precondition(format!("σ = {sigma} outside (1/2, 1]")));
    }
    let first = real_zeta(2.0 * sigma)?.powi(4) / real_zeta(4.0 * sigma)? * t;
    let second = t / (3.0 - 4.0 * sigma) * (t / (2.0 * PI)).powf(2.0 - 4.0 * sigma) * real_zeta(2.0 - 2.0 * sigma)?.powi(4)
        / real_zeta(4.0 - 4.0 * sigma)?;
    Ok(first + second)
}

/// Main term of the fourth moment for `σ ≠ 3/4`.
pub fn main_term(t: f64, sigma: f64, coeffs: &SecondaryCoefficients) -> Result<f64, MomentError> {
    if is_three_quarters(sigma) {
        return Err(MomentError::NearThreeQuarters(sigma));
    }
    Ok(leading_terms(t, sigma)? + t.powf(2.0 - 2.0 * sigma) * coeffs.poly(t))
}

/// Main term at σ = 3/4: `ζ⁴(3/2)/ζ(3)·T + T^{1/2}(A₀ + A₁ log T + A₂ log² T)`.
pub fn main_term_threequarters(t: f64, a: [f64; 3]) -> Result<f64, MomentError> {
    if t <= 0.0 {
        return Ok(0.0);
    }
    let l = t.ln();
    Ok(leading_terms(t, 0.75)? + t.sqrt() * (a[0] + a[1] * l + a[2] * l * l))
}

/// [`main_term`] or [`main_term_threequarters`] according to σ.
pub fn main_term_for(t: f64, sigma: f64, coeffs: &SecondaryCoefficients) -> Result<f64, MomentError> {
    if is_three_quarters(sigma) {
        main_term_threequarters(t, coeffs.a)
    } else {
        main_term(t, sigma, coeffs)
    }
}

/// Least-squares fit of the secondary coefficients from `(T, sharp moment)`
/// pairs: `(sharp - leading)/T^{2-2σ}` is regressed on `1, log T, log² T`.
pub fn fit_secondary_coefficients(samples: &[(f64, f64)], sigma: f64) -> Result<SecondaryCoefficients, MomentError> {
    if samples.len() < 12 {
        return Err(MomentError::Precondition(format!("{} samples, need at least 12", samples.len())));
    }
    let (lo, hi) = samples
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &(t, _)| (a.min(t), b.max(t)));
    if !(lo > 0.0 && hi >= 2.0 * lo) {
        return Err(MomentError::Precondition(format!("window [{lo}, {hi}] spans less than an octave")));
    }
    let exponent = 2.0 - 2.0 * if is_three_quarters(sigma) { 0.75 } else { sigma };
    let n = samples.len();
    let mut design = DMatrix::zeros(n, 3);
    let mut rhs = DVector::zeros(n);
    for (i, &(t, sharp)) in samples.iter().enumerate() {
        let l = t.ln();
        design[(i, 0)] = 1.0;
        design[(i, 1)] = l;
        design[(i, 2)] = l * l;
        rhs[i] = (sharp - leading_terms(t, sigma)?) / t.powf(exponent);
    }
    let svd = design.clone().svd(true, true);
    let (smax, smin) = (svd.singular_values.max(), svd.singular_values.min());
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if condition > 1e12 {
        return Err(MomentError::RankDeficient(condition));
    }
    let coef = svd.solve(&rhs, 0.0).map_err(|e| MomentError::Degenerate(e.to_string()))?;
    let scaled_residual = &rhs - &design * &coef;
    let dof = (n - 3).max(1) as f64;
    let variance = scaled_residual.norm_squared() / dof;
    let gram_inv = (design.transpose() * &design)
        .try_inverse()
        .ok_or_else(|| MomentError::RankDeficient(condition))?;
    let std_errors = [0, 1, 2].map(|k| (variance * gram_inv[(k, k)]).max(0.0).sqrt());
    let rms = (samples
        .iter()
        .zip(scaled_residual.iter())
        .map(|(&(t, _), r)| (r * t.powf(exponent)).powi(2))
        .sum::<f64>()
        / n as f64)
        .sqrt();
    Ok(SecondaryCoefficients {
        sigma,
        a: [coef[0], coef[1], coef[2]],
        std_errors,
        fit_window: (lo, hi),
        fit_residual: rms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_leading_constant() {
        // ζ(2)⁴/ζ(4) = (π²/6)⁴ / (π⁴/90) = 5π⁴/72
        let c = real_zeta(2.0).unwrap().powi(4) / real_zeta(4.0).unwrap();
        assert!((c - 5.0 * PI.powi(4) / 72.0).abs() < 1e-13);
    }

    #[test]
    fn boundary_leading_terms() {
        // ζ(0) = -1/2, so the second term is (2π)²/(8T)
        let t = 2000.0;
        let expected = 5.0 * PI.powi(4) / 72.0 * t + PI * PI / (2.0 * t);
        assert!((leading_terms(t, 1.0).unwrap() - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn unit_height_substitution() {
        let sigma: f64 = 0.6;
        let z = |x| real_zeta(x).unwrap();
        let expected = z(2.0 * sigma).powi(4) / z(4.0 * sigma)
            + (2.0 * PI).powf(4.0 * sigma - 2.0) * z(2.0 - 2.0 * sigma).powi(4) / ((3.0 - 4.0 * sigma) * z(4.0 - 4.0 * sigma));
        let got = main_term(1.0, sigma, &SecondaryCoefficients::zero(sigma)).unwrap();
        assert!((got - expected).abs() < 1e-12 * expected.abs());
    }

    #[test]
    fn refuses_three_quarters() {
        let c = SecondaryCoefficients::zero(0.75);
        assert!(matches!(main_term(100.0, 0.7505, &c), Err(MomentError::NearThreeQuarters(_))));
        assert!(main_term_for(100.0, 0.7505, &c).is_ok());
    }

    #[test]
    fn three_quarters_slope_and_origin() {
        let slope = real_zeta(1.5).unwrap().powi(4) / real_zeta(3.0).unwrap();
        let v = main_term_threequarters(1000.0, [0.0; 3]).unwrap();
        assert!((v / 1000.0 - slope).abs() < 1e-14);
        assert_eq!(main_term_threequarters(0.0, [1.0, 2.0, 3.0]).unwrap(), 0.0);
        assert!(main_term_threequarters(1e-20, [1.0, 2.0, 3.0]).unwrap().abs() < 1e-5);
    }

    #[test]
    fn continuity_away_from_three_quarters() {
        let coeffs = SecondaryCoefficients { a: [1.0, -0.5, 0.1], ..SecondaryCoefficients::zero(0.6) };
        for sigma in [0.55, 0.6, 0.7] {
            let m = main_term(1000.0, sigma, &coeffs).unwrap();
            let jump = |d: f64| (main_term(1000.0, sigma + d, &coeffs).unwrap() - m).abs();
            // differences shrink linearly with the step
            for d in [-1e-4, 1e-4] {
                let ratio = jump(d) / jump(d / 10.0);
                assert!((ratio - 10.0).abs() < 0.5, "σ = {sigma}: {ratio}");
            }
        }
    }

    fn synthetic(sigma: f64, a: [f64; 3], noise: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
        (0..40)
            .map(|i| {
                let t = 200.0 + 20.0 * i as f64;
                let l = t.ln();
                let sharp = leading_terms(t, sigma).unwrap() + t.powf(2.0 - 2.0 * sigma) * (a[0] + a[1] * l + a[2] * l * l);
                (t, sharp + noise(t))
            })
            .collect()
    }

    #[test]
    fn recovers_exact_coefficients() {
        let fit = fit_secondary_coefficients(&synthetic(0.6, [1.0, -2.0, 0.5], |_| 0.0), 0.6).unwrap();
        for (got, want) in fit.a.iter().zip([1.0, -2.0, 0.5]) {
            assert!((got - want).abs() < 1e-9, "{:?}", fit.a);
        }
        assert!(fit.fit_residual < 1e-8);
        let fit34 = fit_secondary_coefficients(&synthetic(0.75, [0.3, 0.2, -0.1], |_| 0.0), 0.75).unwrap();
        assert!((fit34.a[2] + 0.1).abs() < 1e-9);
    }

    #[test]
    fn tolerates_oscillatory_contamination() {
        let truth = [1.0, -2.0, 0.5];
        let data = synthetic(0.6, truth, |t| t.powf(0.3) * (0.37 * t).sin());
        let fit = fit_secondary_coefficients(&data, 0.6).unwrap();
        for k in 0..3 {
            assert!((fit.a[k] - truth[k]).abs() < 3.0 * fit.std_errors[k], "a{k}: {:?} ± {:?}", fit.a, fit.std_errors);
        }
    }

    #[test]
    fn narrow_or_short_windows_fail() {
        let data = synthetic(0.6, [1.0, 0.0, 0.0], |_| 0.0);
        assert!(fit_secondary_coefficients(&data[..10], 0.6).is_err());
        let narrow: Vec<(f64, f64)> = (0..20).map(|i| (1000.0 + i as f64, 1.0)).collect();
        assert!(fit_secondary_coefficients(&narrow, 0.6).is_err());
    }
}
