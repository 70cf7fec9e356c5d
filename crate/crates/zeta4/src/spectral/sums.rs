use std::f64::consts::PI;

use rayon::prelude::*;

use super::{hecke_value, MaassFormRecord, SpectralDataset, SpectralError};
use crate::lambda::{phase_coefficients, saddle_point, SADDLE_FRONT_CONSTANT};
use crate::moments::{real_zeta, MomentParameters};

/// Which expression for the saddle point `Y₀(κ, T)` enters the damping factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SaddleForm {
    /// `(κ/T)(√(1 + κ²/(4T²)) + κ/(2T))`, the root of `T²y² - κ²y - κ² = 0`.
    #[default]
    Derived,
    /// `(κ/T)(√(1 + (κ/4T)²) + κ/(2T))`, as printed with the averaged formula.
    Literal,
}

impl SaddleForm {
    pub fn y0(self, kappa: f64, t: f64) -> f64 {
        match self {
            Self::Derived => saddle_point(kappa, t),
            Self::Literal => {
                let rho = kappa / t;
                rho * ((1.0 + (0.25 * rho).powi(2)).sqrt() + 0.5 * rho)
            }
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::Derived => "derived",
            Self::Literal => "literal",
        }
    }
}

/// `S(T, σ; G)` with its truncation bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSum {
    pub value: f64,
    /// `T G⁻¹ log T`.
    pub cutoff: f64,
    /// Number of forms inside the cutoff.
    pub terms: usize,
    /// Share of the damping-weighted Weyl mass `∫ κ e^{-G² log²(1+Y₀)/4} dκ`
    /// on `[0, cutoff]` that lies below the largest `κ_j` in the data.
    pub coverage: f64,
    pub saddle_form: SaddleForm,
}

/// `T G⁻¹ log T`.
pub fn truncation_point(t: f64, g: f64) -> f64 {
    t / g * t.ln()
}

/// `C(σ) T^{3/2 - 2σ}` with the calibrated front constant.
pub fn spectral_prefactor(t: f64, sigma: f64) -> f64 {
    SADDLE_FRONT_CONSTANT * t.powf(1.5 - 2.0 * sigma)
}

fn third_phase_coefficient() -> f64 {
    phase_coefficients(3)[0]
}

fn damping(kappa: f64, p: &MomentParameters, form: SaddleForm) -> f64 {
    let l = form.y0(kappa, p.t()).ln_1p();
    (-0.25 * p.g() * p.g() * l * l).exp()
}

/// One summand without the prefactor, given `H_j(2σ - 1/2)`.
pub fn spectral_term(rec: &MaassFormRecord, p: &MomentParameters, shifted_value: f64, form: SaddleForm) -> f64 {
    let (kappa, t) = (rec.kappa, p.t());
    let phase = kappa * (kappa / (4.0 * std::f64::consts::E * t)).ln() + third_phase_coefficient() * kappa.powi(3) / (t * t);
    rec.alpha
        * kappa.powf(2.0 * p.sigma() - 2.5)
        * rec.central_value.powi(2)
        * shifted_value
        * damping(kappa, p, form)
        * phase.cos()
}

fn coverage(p: &MomentParameters, cutoff: f64, max_kappa: f64, form: SaddleForm) -> f64 {
    if max_kappa >= cutoff {
        return 1.0;
    }
    let mass = |b: f64| {
        let n = 2000;
        let h = b / n as f64;
        (0..n).map(|i| (i as f64 + 0.5) * h).map(|k| k * damping(k, p, form) * h).sum::<f64>()
    };
    let total = mass(cutoff);
    if total > 0.0 {
        mass(max_kappa) / total
    } else {
        1.0
    }
}

/// [`spectral_sum_with`] using the derived saddle point.
pub fn spectral_sum_s(p: &MomentParameters, ds: &SpectralDataset) -> Result<SpectralSum, SpectralError> {
    spectral_sum_with(p, ds, SaddleForm::Derived)
}

/// `S(T, σ; G)` summed over `κ_j <= T G⁻¹ log T`.  `H_j(2σ - 1/2)` comes from
/// the shipped values when present and from the approximate functional
/// equation otherwise; forms with `H_j(1/2) = 0` are skipped.
pub fn spectral_sum_with(
    p: &MomentParameters,
    ds: &SpectralDataset,
    form: SaddleForm,
) -> Result<SpectralSum, SpectralError> {
    let cutoff = truncation_point(p.t(), p.g());
    let shift = 2.0 * p.sigma() - 0.5;
    let active: Vec<&MaassFormRecord> = ds.records.iter().filter(|r| r.kappa <= cutoff).collect();
    let terms: Vec<f64> = active
        .par_iter()
        .map(|rec| {
            if rec.central_value == 0.0 {
                return Ok(0.0);
            }
            Ok(spectral_term(rec, p, hecke_value(rec, shift)?, form))
        })
        .collect::<Result<_, SpectralError>>()?;
    Ok(SpectralSum {
        value: spectral_prefactor(p.t(), p.sigma()) * terms.iter().sum::<f64>(),
        cutoff,
        terms: active.len(),
        coverage: coverage(p, cutoff, ds.max_kappa(), form),
        saddle_form: form,
    })
}

/// The two spectral averages of `H_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AverageVariant {
    /// `Σ α_j H_j(1/2) H_j²(τ)` against `π⁻² ζ²(τ + 1/2) ζ(2τ) K²`.
    CentralTimesSquare,
    /// `Σ α_j H_j²(1/2) H_j(τ)` against `2π⁻² ζ²(τ + 1/2) K² log K`.
    SquareTimesShifted,
}

/// `(partial sum over κ_j <= K, asymptotic main term)`.
pub fn theorem2_partial_sums(
    ds: &SpectralDataset,
    tau: f64,
    k: f64,
    variant: AverageVariant,
) -> Result<(f64, f64), SpectralError> {
    if !(tau > 0.5 && tau < 1.0) {
        return Err(SpectralError::Precondition(format!("τ = {tau} outside (1/2, 1)")));
    }
    if k > ds.max_kappa() {
        return Err(SpectralError::InsufficientData(format!(
            "K = {k} beyond the largest κ_j = {} in the data",
            ds.max_kappa()
        )));
    }
    let mut lhs = 0.0;
    for rec in ds.records.iter().take_while(|r| r.kappa <= k) {
        if rec.central_value == 0.0 {
            continue;
        }
        let h = hecke_value(rec, tau)?;
        lhs += match variant {
            AverageVariant::CentralTimesSquare => rec.alpha * rec.central_value * h * h,
            AverageVariant::SquareTimesShifted => rec.alpha * rec.central_value.powi(2) * h,
        };
    }
    let z = real_zeta(tau + 0.5)?.powi(2);
    let rhs = match variant {
        AverageVariant::CentralTimesSquare => z * real_zeta(2.0 * tau)? * k * k / (PI * PI),
        AverageVariant::SquareTimesShifted => 2.0 * z * k * k * k.ln() / (PI * PI),
    };
    Ok((lhs, rhs))
}

/// `(L_σ(κ), N_σ(κ))`: sums of `α_j H_j²(1/2) H_j(σ)` and
/// `α_j H_j(1/2) H_j²(σ)` over the forms with `|κ_j - κ| < 1e-9`.
pub fn kappa_class_sums(ds: &SpectralDataset, sigma: f64, kappa: f64) -> Result<(f64, f64), SpectralError> {
    let mut l = 0.0;
    let mut n = 0.0;
    for rec in ds.records.iter().filter(|r| (r.kappa - kappa).abs() < 1e-9) {
        if rec.central_value == 0.0 {
            continue;
        }
        let h = hecke_value(rec, sigma)?;
        l += rec.alpha * rec.central_value.powi(2) * h;
        n += rec.alpha * rec.central_value * h * h;
    }
    Ok((l, n))
}

/// Fraction of the distinct `κ_j <= K` with `L_σ(κ_j) ≠ 0`.
pub fn nonvanishing_fraction(ds: &SpectralDataset, sigma: f64, k: f64) -> Result<f64, SpectralError> {
    let classes: Vec<f64> = ds.records.iter().map(|r| r.kappa).filter(|&x| x <= k).collect();
    if classes.is_empty() {
        return Ok(0.0);
    }
    let mut nonzero = 0usize;
    for &kappa in &classes {
        if kappa_class_sums(ds, sigma, kappa)?.0 != 0.0 {
            nonzero += 1;
        }
    }
    Ok(nonzero as f64 / classes.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::parse_spectral_dataset;

    fn one_form(kappa: f64) -> SpectralDataset {
        let forms = format!("j,kappa,epsilon,alpha,H_half,H_0.7\n1,{kappa},1,1.3,2.0,0.9\n");
        parse_spectral_dataset(&forms, "j,n,t\n1,2,0.4\n1,4,-0.84\n1,3,-0.2\n", 4).unwrap()
    }

    #[test]
    fn empty_truncation_range() {
        let ds = one_form(9.53);
        // T/G log T = 1000/500 · log 1000 ≈ 13.8; raise G until below κ₁
        let p = MomentParameters::new(0.6, 1000.0, 900.0).unwrap();
        assert!(truncation_point(1000.0, 900.0) < 9.53);
        let s = spectral_sum_s(&p, &ds).unwrap();
        assert_eq!((s.value, s.terms), (0.0, 0));
    }

    #[test]
    fn single_term_closed_form() {
        let ds = one_form(9.53);
        let (t, sigma, g) = (2000.0, 0.6, 400.0);
        let p = MomentParameters::new(sigma, t, g).unwrap();
        let s = spectral_sum_s(&p, &ds).unwrap();
        let kappa: f64 = 9.53;
        let y0 = kappa / t * ((1.0 + kappa * kappa / (4.0 * t * t)).sqrt() + kappa / (2.0 * t));
        let expected = SADDLE_FRONT_CONSTANT
            * t.powf(1.5 - 2.0 * sigma)
            * 1.3
            * kappa.powf(2.0 * sigma - 2.5)
            * 4.0
            * 0.9
            * (-(g * g) * (1.0 + y0).ln().powi(2) / 4.0).exp()
            * (kappa * (kappa / (4.0 * std::f64::consts::E * t)).ln() - kappa.powi(3) / (48.0 * t * t)).cos();
        assert!((s.value - expected).abs() < 1e-13 * expected.abs(), "{} vs {expected}", s.value);
        assert_eq!(s.terms, 1);
        assert_eq!(s.saddle_form, SaddleForm::Derived);
    }

    #[test]
    fn prefactor_scaling_under_doubling() {
        for sigma in [0.55, 0.6, 0.7] {
            let ratio = spectral_prefactor(2000.0, sigma) / spectral_prefactor(1000.0, sigma);
            assert!((ratio - 2f64.powf(1.5 - 2.0 * sigma)).abs() < 1e-14);
        }
    }

    #[test]
    fn literal_saddle_form_is_close_for_small_ratio() {
        for (k, t) in [(10.0, 1000.0), (40.0, 4000.0)] {
            let (a, b) = (SaddleForm::Derived.y0(k, t), SaddleForm::Literal.y0(k, t));
            assert!(a > b && (a - b) / a < 1e-4);
        }
    }

    #[test]
    fn coverage_reports_shortfall() {
        let ds = one_form(9.53);
        let p = MomentParameters::new(0.6, 4000.0, 100.0).unwrap();
        let s = spectral_sum_s(&p, &ds).unwrap();
        assert!(s.cutoff > 9.53 && s.coverage < 1.0 && s.coverage > 0.0);
        let p = MomentParameters::new(0.6, 2000.0, 1850.0).unwrap();
        assert!(truncation_point(2000.0, 1850.0) < 9.53);
        assert_eq!(spectral_sum_s(&p, &ds).unwrap().coverage, 1.0);
    }

    #[test]
    fn averages_and_classes() {
        let ds = one_form(9.53);
        let (lhs, rhs) = theorem2_partial_sums(&ds, 0.7, 5.0, AverageVariant::CentralTimesSquare).unwrap();
        assert_eq!(lhs, 0.0);
        assert!(rhs > 0.0);
        let (lhs, _) = theorem2_partial_sums(&ds, 0.7, 9.53, AverageVariant::SquareTimesShifted).unwrap();
        assert!((lhs - 1.3 * 4.0 * 0.9).abs() < 1e-15);
        assert!(theorem2_partial_sums(&ds, 0.7, 20.0, AverageVariant::SquareTimesShifted).is_err());
        assert_eq!(kappa_class_sums(&ds, 0.7, 12.0).unwrap(), (0.0, 0.0));
        let (l, n) = kappa_class_sums(&ds, 0.7, 9.53).unwrap();
        assert!((l - 1.3 * 4.0 * 0.9).abs() < 1e-15 && (n - 1.3 * 2.0 * 0.81).abs() < 1e-15);
        assert_eq!(nonvanishing_fraction(&ds, 0.7, 10.0).unwrap(), 1.0);
    }
}
