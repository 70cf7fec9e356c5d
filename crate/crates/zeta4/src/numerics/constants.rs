/// Euler's constant, `-Γ'(1)`.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Bernoulli numbers `B_2, B_4, ..., B_20` in order.
pub const BERNOULLI_EVEN: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// `ln(2π)`.
pub const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Read-only bundle of the constants the rest of the crate relies on.
#[derive(Debug, Clone, PartialEq)]
pub struct Constants {
    pub euler_gamma: f64,
    pub bernoulli: Vec<f64>,
}

impl Constants {
    pub fn new() -> Self {
        Self {
            euler_gamma: EULER_GAMMA,
            bernoulli: BERNOULLI_EVEN.to_vec(),
        }
    }

    /// `B_{2k}` for `1 <= k <= 10`.
    pub fn bernoulli_2k(&self, k: usize) -> Option<f64> {
        k.checked_sub(1).and_then(|i| self.bernoulli.get(i)).copied()
    }
}

impl Default for Constants {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_gamma_digits() {
        assert!((Constants::new().euler_gamma - 0.5772156649015329).abs() < 1e-16);
    }

    #[test]
    fn low_bernoulli_numbers_exact() {
        let c = Constants::new();
        assert_eq!(c.bernoulli_2k(1), Some(1.0 / 6.0));
        assert_eq!(c.bernoulli_2k(2), Some(-1.0 / 30.0));
        assert_eq!(c.bernoulli_2k(0), None);
        assert_eq!(c.bernoulli_2k(11), None);
    }

    #[test]
    fn ln_2pi_matches_std() {
        assert!((LN_2PI - (2.0 * std::f64::consts::PI).ln()).abs() < 1e-15);
    }
}
