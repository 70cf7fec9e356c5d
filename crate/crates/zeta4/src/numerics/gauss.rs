use std::f64::consts::PI;

use super::NumericsError;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// `∫_{-Ξ₀}^{Ξ₀} ξ^{2k} e^{-cξ²/2} dξ`, returned as the untruncated value
/// `2^{k+1/2} Γ(k+1/2) c^{-1/2-k}` plus the (negative) correction for the
/// finite range.  Requires `Ξ₀ √c >= 1`.
pub fn gaussian_moment(k: u32, c: f64, xi0: f64) -> Result<f64, NumericsError> {
    let (full, correction) = gaussian_moment_parts(k, c, xi0)?;
    Ok(full + correction)
}

/// The two pieces of [`gaussian_moment`]: `(full-line value, truncation correction)`.
pub fn gaussian_moment_parts(k: u32, c: f64, xi0: f64) -> Result<(f64, f64), NumericsError> {
    if !(c > 0.0 && xi0 > 0.0) {
        return Err(NumericsError::Precondition(format!("need c > 0 and Ξ₀ > 0, got c = {c}, Ξ₀ = {xi0}")));
    }
    if xi0 * c.sqrt() < 1.0 {
        return Err(NumericsError::Precondition(format!("Ξ₀·√c = {} < 1", xi0 * c.sqrt())));
    }
    let x = 0.5 * c * xi0 * xi0;
    // Γ(1/2) and Γ(1/2, x), then the upward recurrences in a = k + 1/2.
    let mut gamma_full = PI.sqrt();
    let mut gamma_upper = PI.sqrt() * libm::erfc(x.sqrt());
    let mut a = 0.5;
    for _ in 0..k {
        gamma_upper = a * gamma_upper + x.powf(a) * (-x).exp();
        gamma_full *= a;
        a += 1.0;
    }
    let scale = 2f64.powf(a) * c.powf(-a);
    Ok((scale * gamma_full, -scale * gamma_upper))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let (x, w) = gauss_legendre(10);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert!((s - 2.0 / 19.0).abs() < 1e-14);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
    }

    #[test]
    fn legendre_rule_odd_count_has_zero_node() {
        let (x, _) = gauss_legendre(7);
        assert!(x[3].abs() < 1e-16);
    }

    #[test]
    fn zeroth_moment_is_sqrt_pi() {
        let v = gaussian_moment(0, 2.0, 10.0).unwrap();
        assert!((v - PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn first_moment_is_sqrt_two_pi() {
        let v = gaussian_moment(1, 1.0, 12.0).unwrap();
        assert!((v - (2.0 * PI).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn precondition_enforced() {
        assert!(gaussian_moment(0, 1.0, 0.5).is_err());
        assert!(gaussian_moment(0, -1.0, 5.0).is_err());
    }

    #[test]
    fn correction_is_small_and_negative() {
        let (full, corr) = gaussian_moment_parts(2, 1.0, 2.0).unwrap();
        assert!(corr < 0.0 && corr.abs() < full);
    }
}
