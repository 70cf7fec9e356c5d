use std::f64::consts::{LN_2, PI};

use super::constants::{BERNOULLI_EVEN, LN_2PI};
use super::{NumericsError, C64};

const POLE_RADIUS: f64 = 1e-12;
const STIRLING_RADIUS: f64 = 10.0;

// Lanczos approximation with g = 671/128 and 14 correction coefficients.
const LANCZOS_G: f64 = 5.242_187_5;
const LANCZOS_C0: f64 = 0.999_999_999_999_997_1;
const LANCZOS: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];

/// Principal branch of `ln Γ(s)`, analytic on the plane slit along the
/// non-positive real axis.
///
/// Uses the Stirling series (Bernoulli terms up to `B_20`) for `|s| > 10`,
/// a Lanczos sum for smaller arguments with `Re s >= 1/2`, and reflection
/// for `Re s < 1/2`.
pub fn log_gamma(s: C64) -> Result<C64, NumericsError> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(NumericsError::Domain(format!("non-finite argument {s}")));
    }
    if s.re <= 0.5 && s.im.abs() < POLE_RADIUS {
        let n = s.re.round();
        if n <= 0.0 && (s - C64::new(n, 0.0)).norm() < POLE_RADIUS {
            return Err(NumericsError::Pole { re: s.re, im: s.im });
        }
    }
    Ok(log_gamma_unchecked(s))
}

fn log_gamma_unchecked(s: C64) -> C64 {
    if s.re < 0.5 {
        // ln Γ(s) = ln π - ln sin(πs) - ln Γ(1 - s)
        let one_minus = C64::new(1.0, 0.0) - s;
        return C64::new(PI.ln(), 0.0) - ln_sin_pi(s) - log_gamma_unchecked(one_minus);
    }
    if s.norm() > STIRLING_RADIUS {
        stirling(s)
    } else {
        lanczos(s)
    }
}

fn stirling(s: C64) -> C64 {
    let inv = s.inv();
    let inv2 = inv * inv;
    let mut tail = C64::new(0.0, 0.0);
    let mut pow = inv;
    for (i, b) in BERNOULLI_EVEN.iter().enumerate() {
        let two_k = 2.0 * (i as f64 + 1.0);
        tail += pow * (b / (two_k * (two_k - 1.0)));
        pow *= inv2;
    }
    (s - 0.5) * s.ln() - s + 0.5 * LN_2PI + tail
}

fn lanczos(s: C64) -> C64 {
    // NR-style evaluation of ln Γ(s) for Re s >= 1/2.
    let tmp = s + LANCZOS_G;
    let head = (s + 0.5) * tmp.ln() - tmp;
    let mut series = C64::new(LANCZOS_C0, 0.0);
    let mut denom = s;
    for c in LANCZOS {
        denom += 1.0;
        series += c / denom;
    }
    head + (series * 2.506_628_274_631_000_5).ln() - s.ln()
}

/// `ln sin(πz)` continued analytically from `z = 1/2` through the upper and
/// lower half planes separately (the branch matching the reflection formula
/// for the principal `ln Γ`).  On the real axis the upper-half-plane limit is
/// returned.
pub fn ln_sin_pi(z: C64) -> C64 {
    if z.im < 0.0 {
        return ln_sin_pi(z.conj()).conj();
    }
    // sin(πz) = (i/2) e^{-iπz} (1 - e^{2πiz}); |e^{2πiz}| <= 1 here.
    let i = C64::new(0.0, 1.0);
    let q = (2.0 * PI * i * z).exp();
    -i * PI * z + (C64::new(1.0, 0.0) - q).ln() + C64::new(-LN_2, PI / 2.0)
}

/// Asymptotic expansion of `Γ^(k)(s)/Γ(s)` as a polynomial in `ln s` whose
/// coefficients are truncated series in `1/s`:
///
/// `Γ^(k)(s)/Γ(s) ≈ Σ_{j=0..k} b_{j,k}(s) ln^j s`, with
/// `b_{j,k}(s) = Σ_{m=0..r} β_{j,m} s^{-m}`.
///
/// The pure power terms `β_{0,m}` for `m >= 1` are the coefficients
/// `c_{-m,k}`; `β_{j,0}` are the limiting constants of `b_{j,k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaLogExpansion {
    pub s: C64,
    pub k: usize,
    pub r: usize,
    /// `coeffs[j][m] = β_{j,m}`.
    pub coeffs: Vec<Vec<f64>>,
}

impl GammaLogExpansion {
    /// `b_{j,k}(s)` including every retained power of `1/s`.
    pub fn b(&self, j: usize) -> C64 {
        let inv = self.s.inv();
        self.coeffs
            .get(j)
            .map(|row| {
                row.iter()
                    .rev()
                    .fold(C64::new(0.0, 0.0), |acc, &c| acc * inv + c)
            })
            .unwrap_or_default()
    }

    /// Leading constant of `b_{j,k}(s)`.
    pub fn b_limit(&self, j: usize) -> f64 {
        self.coeffs.get(j).map_or(0.0, |row| row[0])
    }

    /// `c_{-m,k}` for `1 <= m <= r`.
    pub fn c(&self, m: usize) -> Option<f64> {
        if m == 0 || m > self.r {
            return None;
        }
        Some(self.coeffs[0][m])
    }

    /// Value of the truncated expansion at `s`.
    pub fn evaluate(&self) -> C64 {
        let ln_s = self.s.ln();
        let mut pow = C64::new(1.0, 0.0);
        let mut total = C64::new(0.0, 0.0);
        for j in 0..=self.k {
            total += self.b(j) * pow;
            pow *= ln_s;
        }
        total
    }
}

/// Coefficients of the log-polynomial expansion of `Γ^(k)(s)/Γ(s)` up to
/// `O(|s|^{-r-1})`.  Requires `|s| >= 2`, `k >= 1` and `r <= 20`.
pub fn gamma_log_expansion(s: C64, k: usize, r: usize) -> Result<GammaLogExpansion, NumericsError> {
    if s.norm() < 2.0 {
        return Err(NumericsError::Domain(format!("|s| = {} < 2", s.norm())));
    }
    if k == 0 {
        return Err(NumericsError::Domain("derivative order k must be positive".into()));
    }
    if r > 2 * BERNOULLI_EVEN.len() {
        return Err(NumericsError::Domain(format!("r = {r} exceeds the stored Bernoulli numbers")));
    }
    // Digamma: ψ = L + Σ_m p_m u^m with L = ln s, u = 1/s.
    let mut psi_tail = vec![0.0; r + 1];
    if r >= 1 {
        psi_tail[1] = -0.5;
    }
    for (i, b) in BERNOULLI_EVEN.iter().enumerate() {
        let m = 2 * (i + 1);
        if m <= r {
            psi_tail[m] = -b / m as f64;
        }
    }

    // D_0 = 1, D_{n+1} = d/ds D_n + ψ D_n, where d/ds L = u and d/ds u = -u².
    let mut d: Vec<Vec<f64>> = vec![vec![0.0; r + 1]];
    d[0][0] = 1.0;
    for _ in 0..k {
        let degree = d.len(); // new polynomial has degree `degree` in L
        let mut next = vec![vec![0.0; r + 1]; degree + 1];
        for (j, row) in d.iter().enumerate() {
            for m in 0..=r {
                let c = row[m];
                if c == 0.0 {
                    continue;
                }
                // derivative of u^m: -m u^{m+1}
                if m >= 1 && m < r {
                    next[j][m + 1] -= m as f64 * c;
                }
                // derivative of L^j: j L^{j-1} u
                if j >= 1 && m < r {
                    next[j - 1][m + 1] += j as f64 * c;
                }
                // ψ · term: L^{j+1} u^m + Σ p_n L^j u^{m+n}
                next[j + 1][m] += c;
                for (n, &p) in psi_tail.iter().enumerate().skip(1) {
                    if m + n > r {
                        break;
                    }
                    next[j][m + n] += p * c;
                }
            }
        }
        d = next;
    }
    Ok(GammaLogExpansion { s, k, r, coeffs: d })
}
