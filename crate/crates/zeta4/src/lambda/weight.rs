use std::f64::consts::PI;

use super::LambdaError;

/// The even Gaussian weight centred at `±T` with width `G`, normalised so
/// that its cosine transform is `exp(-G²x²/4)·cos(xT)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianWeight {
    center: f64,
    width: f64,
}

impl GaussianWeight {
    /// Requires `T^{1/3} <= G <= T`.
    pub fn new(center: f64, width: f64) -> Result<Self, LambdaError> {
        if !(center.is_finite() && center > 0.0 && width.is_finite() && width > 0.0) {
            return Err(LambdaError::Precondition(format!("weight needs T, G > 0, got T = {center}, G = {width}")));
        }
        // tiny slack so that G = T^{1/3} computed in floating point is accepted
        if width < center.cbrt() * (1.0 - 1e-12) || width > center {
            return Err(LambdaError::Precondition(format!(
                "width G = {width} outside [T^(1/3), T] for T = {center}"
            )));
        }
        Ok(Self { center, width })
    }

    /// `G = T^{exponent}`.
    pub fn with_width_exponent(center: f64, exponent: f64) -> Result<Self, LambdaError> {
        Self::new(center, center.powf(exponent))
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    /// The weight itself, `g(t)`.
    pub fn value(&self, t: f64) -> f64 {
        let (tc, g) = (self.center, self.width);
        let bump = |d: f64| (-(d / g).powi(2)).exp();
        (bump(tc - t) + bump(tc + t)) / (2.0 * PI.sqrt() * g)
    }

    pub fn cosine_transform(&self, x: f64) -> f64 {
        weight_cosine_transform(self, x)
    }
}

/// `∫ g(t) cos(xt) dt` over the real line, in closed form.
pub fn weight_cosine_transform(w: &GaussianWeight, x: f64) -> f64 {
    (-0.25 * (w.width * x).powi(2)).exp() * (x * w.center).cos()
}
