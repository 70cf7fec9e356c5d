//! The Gauss hypergeometric function `F(α, β; γ; z)` by its power series and
//! by the quadratic transformation for `γ = 2β`.

use thiserror::Error;

use crate::numerics::C64;

/// Hard cap on the number of series terms.
pub const MAX_TERMS: usize = 100_000;
/// Largest |z| accepted by the direct series.
pub const SERIES_RADIUS: f64 = 0.9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HypergeomError {
    #[error("γ = {0} is a non-positive integer")]
    GammaPole(C64),
    #[error("|z| = {0} is outside the series disk |z| <= 0.9")]
    SlowConvergence(f64),
    #[error("series did not reach the tolerance within {0} terms")]
    TermLimit(usize),
    #[error("1 - z = {0} lies on the branch cut of the square root")]
    BranchCut(C64),
    #[error("2β = {0} is a negative odd integer")]
    ExcludedBeta(C64),
    #[error("no evaluation route covers these parameters: {0}")]
    Unsupported(String),
    #[error("invalid tolerance {0}")]
    Tolerance(f64),
}

/// Parameters `(α, β, γ, z)` of `F(α, β; γ; z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypParams {
    pub alpha: C64,
    pub beta: C64,
    pub gamma: C64,
    pub z: C64,
}

impl HypParams {
    pub fn new(alpha: C64, beta: C64, gamma: C64, z: C64) -> Self {
        Self { alpha, beta, gamma, z }
    }

    fn check_gamma(&self) -> Result<(), HypergeomError> {
        if is_nonpositive_integer(self.gamma) {
            Err(HypergeomError::GammaPole(self.gamma))
        } else {
            Ok(())
        }
    }

    /// Whether `γ = 2β` up to rounding.
    pub fn is_quadratic_shape(&self) -> bool {
        (self.gamma - 2.0 * self.beta).norm() <= 1e-14 * (1.0 + self.gamma.norm())
    }
}

fn is_nonpositive_integer(x: C64) -> bool {
    x.im == 0.0 && x.re <= 0.0 && x.re == x.re.round()
}

/// Partial sum of the defining series, truncated once a geometric bound
/// on the tail falls below `tol · |sum|`.
pub fn hyp2f1_series(p: &HypParams, tol: f64) -> Result<C64, HypergeomError> {
    if !(tol > 0.0) {
        return Err(HypergeomError::Tolerance(tol));
    }
    p.check_gamma()?;
    let r = p.z.norm();
    if r > SERIES_RADIUS {
        return Err(HypergeomError::SlowConvergence(r));
    }
    let one = C64::new(1.0, 0.0);
    if r == 0.0 {
        return Ok(one);
    }
    let a_max = p.alpha.norm().max(p.beta.norm()).max(1.0);
    let g = (p.gamma - 1.0).norm();
    let mut term = one;
    let mut sum = one;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        term *= (p.alpha + kf) * (p.beta + kf) / ((p.gamma + kf) * (kf + 1.0)) * p.z;
        sum += term;
        if term.norm() == 0.0 {
            return Ok(sum);
        }
        // For m > |γ-1| the ratio |t_{m}/t_{m-1}| is bounded by
        // |z|(m + A)²/(m(m - |γ-1|)), which decreases in m.
        let m = kf + 2.0;
        if m > g {
            let ratio = r * (m + a_max).powi(2) / (m * (m - g));
            if ratio < 1.0 {
                let tail = term.norm() * ratio / (1.0 - ratio);
                if tail <= tol * sum.norm() {
                    return Ok(sum);
                }
            }
        }
    }
    Err(HypergeomError::TermLimit(MAX_TERMS))
}

/// Transformed argument `((1 - √(1-z))/(1 + √(1-z)))²` and the prefactor base
/// `(1 + √(1-z))/2`, with the principal square root.
pub fn quadratic_argument(z: C64) -> Result<(C64, C64), HypergeomError> {
    let w = C64::new(1.0, 0.0) - z;
    if w.im == 0.0 && w.re <= 0.0 {
        return Err(HypergeomError::BranchCut(w));
    }
    let root = w.sqrt();
    let base = (1.0 + root) * 0.5;
    let ratio = (1.0 - root) / (1.0 + root);
    Ok((ratio * ratio, base))
}

/// `F(α, β; 2β; z)` through the quadratic transformation
/// `((1+√(1-z))/2)^{-2α} F(α, α-β+1/2; β+1/2; ((1-√(1-z))/(1+√(1-z)))²)`.
pub fn hyp2f1_quadratic(alpha: C64, beta: C64, z: C64, tol: f64) -> Result<C64, HypergeomError> {
    let two_beta = 2.0 * beta;
    if two_beta.im == 0.0 && two_beta.re < 0.0 && two_beta.re == two_beta.re.round() && two_beta.re.rem_euclid(2.0) == 1.0 {
        return Err(HypergeomError::ExcludedBeta(two_beta));
    }
    let (zz, base) = quadratic_argument(z)?;
    let inner = HypParams::new(alpha, alpha - beta + 0.5, beta + 0.5, zz);
    let f = hyp2f1_series(&inner, tol)?;
    Ok((-2.0 * alpha * base.ln()).exp() * f)
}

/// Route dispatcher: the quadratic transformation when `γ = 2β` (its argument
/// is always the smaller one), otherwise the direct series for `|z| <= 0.9`.
pub fn hyp2f1(p: &HypParams, tol: f64) -> Result<C64, HypergeomError> {
    p.check_gamma()?;
    if p.is_quadratic_shape() {
        if let Ok((zz, _)) = quadratic_argument(p.z) {
            if zz.norm() <= p.z.norm() && zz.norm() <= SERIES_RADIUS {
                return hyp2f1_quadratic(p.alpha, p.beta, p.z, tol);
            }
        }
    }
    if p.z.norm() <= SERIES_RADIUS {
        return hyp2f1_series(p, tol);
    }
    Err(HypergeomError::Unsupported(format!(
        "|z| = {} with γ ≠ 2β",
        p.z.norm()
    )))
}
