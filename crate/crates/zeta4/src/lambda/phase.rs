use std::f64::consts::LN_2;

use super::LambdaError;
use crate::numerics::series::Series;

/// Which of the two phases `r log y - 2r log((1+√(1+y))/2) ± T log(1+y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// `log((1+√(1+y))/2)`, accurate for small `y`.
pub(crate) fn log_half_one_plus_root(y: f64) -> f64 {
    let root_minus_one = y / (1.0 + (1.0 + y).sqrt());
    (0.5 * root_minus_one).ln_1p()
}

/// The kernel phase on the positive axis.
pub fn phase(y: f64, r: f64, t: f64, branch: Branch) -> f64 {
    r * y.ln() - 2.0 * r * log_half_one_plus_root(y) + branch.sign() * t * y.ln_1p()
}

/// Derivative of [`phase`] in `y`.
pub fn phase_derivative(y: f64, r: f64, t: f64, branch: Branch) -> f64 {
    let root = (1.0 + y).sqrt();
    r / y - r / (1.0 + y + root) + branch.sign() * t / (1.0 + y)
}

/// Second derivative of [`phase`] in `y`.
pub fn phase_second_derivative(y: f64, r: f64, t: f64, branch: Branch) -> f64 {
    let root = (1.0 + y).sqrt();
    let d = 1.0 + y + root;
    -r / (y * y) + r * (1.0 + 0.5 / root) / (d * d) - branch.sign() * t / ((1.0 + y) * (1.0 + y))
}

/// Positive root of `T²y² - r²y - r² = 0`, the stationary point of the
/// minus-branch phase.  Meaningful for `r, T > 0`.
pub fn saddle_point(r: f64, t: f64) -> f64 {
    let rho = r / t;
    rho * ((1.0 + 0.25 * rho * rho).sqrt() + 0.5 * rho)
}

/// Exact second derivative of the minus-branch phase at the saddle point.
/// Behaves like `-T²/r` when `r/T` is small.
pub fn second_derivative_scale(r: f64, t: f64) -> f64 {
    phase_second_derivative(saddle_point(r, t), r, t, Branch::Minus)
}

/// Phase at the saddle point and its expansion in powers of `r/T`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseExpansion {
    /// Saddle point location.
    pub y0: f64,
    /// Exact value of `phase(y0) - r log 4` on the minus branch.
    pub phase_at_saddle: f64,
    /// `c_3, ..., c_N`.
    pub coeffs: Vec<f64>,
    pub order: usize,
    r: f64,
    t: f64,
}

impl PhaseExpansion {
    /// `c_j` for `3 <= j <= N`.
    pub fn coefficient(&self, j: usize) -> Option<f64> {
        j.checked_sub(3).and_then(|i| self.coeffs.get(i)).copied()
    }

    /// `r log(r/(4eT)) + Σ_{j=3}^{N} c_j r^j T^{1-j}`.
    pub fn truncated(&self) -> f64 {
        truncated_phase(&self.coeffs, self.r, self.t)
    }

    /// Exact minus truncated phase, evaluated without forming the large
    /// leading logarithm so that it stays accurate when `r/T` is small.
    pub fn residual(&self) -> f64 {
        let rho = self.r / self.t;
        let tail: f64 = self.coeffs.iter().enumerate().map(|(i, c)| c * rho.powi(i as i32 + 2)).sum();
        self.r * (scaled_phase_deviation(rho) - tail)
    }
}

/// `(phase(y0) - r log 4 - r log(r/(4eT)))/r` as a function of `ρ = r/T`.
fn scaled_phase_deviation(rho: f64) -> f64 {
    let ratio = (1.0 + 0.25 * rho * rho).sqrt() + 0.5 * rho;
    let y0 = rho * ratio;
    // 1 - log(1+y0)/ρ, with log(1+y0)/ρ = ratio · log1p(y0)/y0
    let log_ratio = y0.ln_1p() / y0;
    let tail = 1.0 - ratio * log_ratio;
    ratio.ln() - 2.0 * log_half_one_plus_root(y0) + tail
}

fn truncated_phase(coeffs: &[f64], r: f64, t: f64) -> f64 {
    let rho = r / t;
    let lead = r * ((rho).ln() - 2.0 * LN_2 - 1.0);
    // c_j r^j T^{1-j} = r · c_j ρ^{j-1}
    let tail: f64 = coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| c * rho.powi(i as i32 + 2))
        .sum();
    lead + r * tail
}

/// Taylor coefficients `c_3..c_N` of the saddle phase.  With `ρ = r/T`,
/// `(phase(y0) - r log 4 - r log(r/(4eT)))/r` is a power series in `ρ` whose
/// coefficient of `ρ^{j-1}` is `c_j`.
pub fn phase_coefficients(order: usize) -> Vec<f64> {
    let n = order + 1;
    let rho = Series::variable(0.0, n);
    let ratio = &(&rho * &rho).scale(0.25).add_constant(1.0).sqrt() + &rho.scale(0.5);
    let y0 = &rho * &ratio;
    let half_root = y0.add_constant(1.0).sqrt().add_constant(1.0).scale(0.5);
    let log_one_plus = y0.add_constant(1.0).ln().shift_down(1);
    let g = &(&ratio.ln() - &half_root.ln().scale(2.0)) - &log_one_plus;
    let g = g.add_constant(1.0);
    debug_assert!(g.coeff(0).abs() < 1e-14 && g.coeff(1).abs() < 1e-14);
    (3..=order).map(|j| g.coeff(j - 1)).collect()
}

/// Saddle-point phase data for `r <= T^{0.9}`.
pub fn phase_expansion(r: f64, t: f64, order: usize) -> Result<PhaseExpansion, LambdaError> {
    if !(r > 0.0 && t > 0.0 && r.is_finite() && t.is_finite()) {
        return Err(LambdaError::Precondition(format!("need r, T > 0, got r = {r}, T = {t}")));
    }
    if order < 3 {
        return Err(LambdaError::Precondition(format!("expansion order {order} < 3")));
    }
    if r > t.powf(0.9) {
        return Err(LambdaError::Regime(format!("r = {r} exceeds T^0.9 = {}", t.powf(0.9))));
    }
    let y0 = saddle_point(r, t);
    Ok(PhaseExpansion {
        y0,
        phase_at_saddle: phase(y0, r, t, Branch::Minus) - r * 4f64.ln(),
        coeffs: phase_coefficients(order),
        order,
        r,
        t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn central_difference(f: impl Fn(f64) -> f64, y: f64) -> f64 {
        let h = 1e-5 * y;
        (f(y + h) - f(y - h)) / (2.0 * h)
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let (r, t, y) = (100.0, 1e4, 0.02);
        for branch in [Branch::Plus, Branch::Minus] {
            let fd = central_difference(|y| phase(y, r, t, branch), y);
            let exact = phase_derivative(y, r, t, branch);
            assert!((fd - exact).abs() < 1e-6 * exact.abs(), "{branch:?}: {fd} vs {exact}");
            let fd2 = central_difference(|y| phase_derivative(y, r, t, branch), y);
            let exact2 = phase_second_derivative(y, r, t, branch);
            assert!((fd2 - exact2).abs() < 1e-6 * exact2.abs());
        }
    }

    #[test]
    fn diverges_at_origin() {
        assert!(phase(1e-300, 5.0, 100.0, Branch::Minus) < -3000.0);
    }

    #[test]
    fn saddle_condition() {
        let (r, t) = (80.0, 1e4);
        let y0 = saddle_point(r, t);
        let d = phase_derivative(y0, r, t, Branch::Minus);
        assert!(d.abs() < 1e-10 * t * t / r * y0);
    }

    #[test]
    fn saddle_at_tenth() {
        let y0 = saddle_point(1.0, 10.0);
        let expected = 0.1 * (1.0025f64.sqrt() + 0.05);
        assert!((y0 - expected).abs() < 1e-16);
        assert!((y0 - 0.105_124_922).abs() < 1e-9);
        let small = saddle_point(1.0, 1e9);
        assert!((small * 1e9 - 1.0).abs() < 1e-8);
    }

    #[test]
    fn second_derivative_against_asymptotic() {
        let (r, t) = (50.0, 1e4);
        let exact = second_derivative_scale(r, t);
        assert!(exact < 0.0);
        assert!((exact / (-t * t / r) - 1.0).abs() < 0.02);
        let y0 = saddle_point(r, t);
        let fd = central_difference(|y| phase_derivative(y, r, t, Branch::Minus), y0);
        assert!((fd - exact).abs() < 1e-6 * exact.abs());
    }

    #[test]
    fn leading_coefficient() {
        let c = phase_coefficients(8);
        assert!((c[0] + 1.0 / 48.0).abs() < 1e-15);
        let e = phase_expansion(10.0, 1e3, 3).unwrap();
        assert_eq!(e.coefficient(3), Some(c[0]));
        assert_eq!(e.coefficient(4), None);
    }

    #[test]
    fn even_coefficients_vanish() {
        let c = phase_coefficients(9);
        for j in [4, 6, 8] {
            assert!(c[j - 3].abs() < 1e-15, "c_{j} = {}", c[j - 3]);
        }
        assert!((c[2] - 3.0 / 2560.0).abs() < 1e-15);
        assert!((c[4] + 0.000_116_257_440_476_190_48).abs() < 1e-15);
    }

    #[test]
    fn residual_matches_direct_subtraction() {
        let e = phase_expansion(300.0, 1e3, 3).unwrap();
        let direct = e.phase_at_saddle - e.truncated();
        assert!((e.residual() - direct).abs() < 1e-10);
    }

    #[test]
    fn truncation_error_is_bounded_by_fourth_power() {
        // c_4 = 0, so the N = 3 remainder is really c_5 r^5/T^4
        for t in [1e3f64, 1e4, 1e5] {
            let r = t.powf(0.4);
            let res = phase_expansion(r, t, 3).unwrap().residual().abs();
            assert!(res <= r.powi(4) / t.powi(3) / 48.0);
            let k5 = res / (r.powi(5) / t.powi(4));
            assert!((k5 / (3.0 / 2560.0) - 1.0).abs() < 0.1, "T = {t}: {k5}");
        }
    }

    #[test]
    fn higher_orders_shrink_the_residual() {
        let (r, t) = (200.0, 1e4);
        let mut prev = f64::MAX;
        for n in (3..10).step_by(2) {
            let res = phase_expansion(r, t, n).unwrap().residual().abs();
            assert!(res < prev || res < 1e-12, "N = {n}: {res:e}");
            prev = res;
        }
    }

    #[test]
    fn regime_limits() {
        let t: f64 = 1e3;
        // r = 4eT makes the leading logarithm vanish; far outside the window
        let r = 4.0 * std::f64::consts::E * t;
        assert!(matches!(phase_expansion(r, t, 3), Err(LambdaError::Regime(_))));
        assert!(matches!(phase_expansion(t.powf(0.95), t, 3), Err(LambdaError::Regime(_))));
        assert!(phase_expansion(10.0, t, 2).is_err());
    }
}
