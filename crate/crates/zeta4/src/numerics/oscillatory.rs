//! Filon-type quadrature for `∫ envelope(x) e^{iΩx} dx`.
//!
//! On each panel the envelope is interpolated at Chebyshev–Lobatto points and
//! the interpolant is integrated exactly against the exponential, so the rule
//! stays accurate however many oscillations a panel holds.  The 7-point
//! Lobatto set is a subset of the 13-point set, which gives a free error
//! estimate; panels are bisected until the estimate meets the tolerance.

use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::sync::OnceLock;

use nalgebra::DMatrix;

use super::gauss::gauss_legendre;
use super::quadrature::{QuadratureResult, MAX_EVALUATIONS};
use super::{NumericsError, C64};

const FINE: usize = 12;
const COARSE: usize = 6;
/// Below this local frequency the monomial moments come from a Gauss rule,
/// above it from the (then stable) upward recurrence.
const MOMENT_SWITCH: f64 = 24.0;

struct Rule {
    nodes: Vec<f64>,
    fine_inv: DMatrix<f64>,
    coarse_inv: DMatrix<f64>,
    gl: (Vec<f64>, Vec<f64>),
}

fn rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| {
        let nodes: Vec<f64> = (0..=FINE).map(|j| (j as f64 * PI / FINE as f64).cos()).collect();
        let coarse: Vec<f64> = nodes.iter().step_by(FINE / COARSE).copied().collect();
        let transpose_vandermonde = |pts: &[f64]| {
            let n = pts.len();
            DMatrix::from_fn(n, n, |m, j| pts[j].powi(m as i32))
                .try_inverse()
                .expect("Chebyshev–Lobatto Vandermonde matrix is invertible")
        };
        Rule {
            fine_inv: transpose_vandermonde(&nodes),
            coarse_inv: transpose_vandermonde(&coarse),
            nodes,
            gl: gauss_legendre(48),
        }
    })
}

/// `μ_m = ∫_{-1}^{1} x^m e^{iωx} dx` for `m = 0..=FINE`.
fn moments(omega: f64) -> [C64; FINE + 1] {
    let mut mu = [C64::new(0.0, 0.0); FINE + 1];
    if omega.abs() <= MOMENT_SWITCH {
        let (x, w) = &rule().gl;
        for (&xi, &wi) in x.iter().zip(w) {
            let e = C64::from_polar(wi, omega * xi);
            let mut p = 1.0;
            for m in mu.iter_mut() {
                *m += e * p;
                p *= xi;
            }
        }
    } else {
        let i_omega = C64::new(0.0, omega);
        let ep = C64::from_polar(1.0, omega);
        let em = C64::from_polar(1.0, -omega);
        mu[0] = (ep - em) / i_omega;
        for m in 1..=FINE {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            mu[m] = (ep - em * sign - mu[m - 1] * m as f64) / i_omega;
        }
    }
    mu
}

fn weights(inv: &DMatrix<f64>, mu: &[C64]) -> Vec<C64> {
    let n = inv.nrows();
    (0..n)
        .map(|j| (0..n).fold(C64::new(0.0, 0.0), |acc, m| acc + mu[m] * inv[(j, m)]))
        .collect()
}

struct Panel {
    a: f64,
    b: f64,
    value: C64,
    error: f64,
    order: usize,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other).is_eq()
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.order.cmp(&self.order))
    }
}

fn filon_panel<F>(envelope: &F, omega: f64, a: f64, b: f64) -> Result<(C64, f64), NumericsError>
where
    F: Fn(f64) -> C64,
{
    let r = rule();
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut values = Vec::with_capacity(FINE + 1);
    for &x in &r.nodes {
        let at = center + half * x;
        let v = envelope(at);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(NumericsError::NonFinite { x: at });
        }
        values.push(v);
    }
    let mu = moments(omega * half);
    let fine_w = weights(&r.fine_inv, &mu);
    let coarse_w = weights(&r.coarse_inv, &mu[..=COARSE]);
    let fine: C64 = fine_w.iter().zip(&values).map(|(w, v)| w * v).sum();
    let coarse: C64 = coarse_w
        .iter()
        .zip(values.iter().step_by(FINE / COARSE))
        .map(|(w, v)| w * v)
        .sum();
    let phase = C64::from_polar(half, omega * center);
    Ok((fine * phase, ((fine - coarse) * phase).norm()))
}

/// Integrates `envelope(x)·e^{iΩx}` over `[a, b]` to within
/// `tol · max(1, |value|)` (estimated).
pub fn integrate_oscillatory<F>(
    envelope: F,
    omega: f64,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<QuadratureResult, NumericsError>
where
    F: Fn(f64) -> C64,
{
    if !(a.is_finite() && b.is_finite()) || a >= b {
        return Err(NumericsError::InvalidInterval(format!("[{a}, {b}]")));
    }
    if !(tol > 0.0) || !omega.is_finite() {
        return Err(NumericsError::InvalidInterval(format!("tolerance {tol}, frequency {omega}")));
    }
    let per_panel = FINE + 1;
    let (value, error) = filon_panel(&envelope, omega, a, b)?;
    let mut evaluations = per_panel;
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value, error, order: 0 });
    let mut total = value;
    let mut total_error = error;
    let mut order = 1;
    while total_error > tol * total.norm().max(1.0) {
        if evaluations + 2 * per_panel > MAX_EVALUATIONS {
            return Err(NumericsError::NonConvergence { evaluations, error_estimate: total_error });
        }
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(NumericsError::NonConvergence { evaluations, error_estimate: total_error });
        }
        let (lv, le) = filon_panel(&envelope, omega, worst.a, mid)?;
        let (rv, re) = filon_panel(&envelope, omega, mid, worst.b)?;
        evaluations += 2 * per_panel;
        total += lv + rv - worst.value;
        total_error += le + re - worst.error;
        heap.push(Panel { a: worst.a, b: mid, value: lv, error: le, order });
        heap.push(Panel { a: mid, b: worst.b, value: rv, error: re, order: order + 1 });
        order += 2;
    }
    let value = heap.iter().map(|p| p.value).sum();
    let error_estimate = heap.iter().map(|p| p.error).sum();
    Ok(QuadratureResult { value, error_estimate, evaluations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moment_routes_agree_at_the_switch() {
        let low = {
            let (x, w) = gauss_legendre(60);
            let mut mu = [C64::new(0.0, 0.0); FINE + 1];
            for (&xi, &wi) in x.iter().zip(&w) {
                for (m, slot) in mu.iter_mut().enumerate() {
                    *slot += C64::from_polar(wi, 25.0 * xi) * xi.powi(m as i32);
                }
            }
            mu
        };
        let high = moments(25.0);
        for m in 0..=FINE {
            assert!((low[m] - high[m]).norm() < 1e-13, "m = {m}");
        }
    }

    #[test]
    fn full_periods_vanish() {
        let r = integrate_oscillatory(|_| C64::new(1.0, 0.0), 10.0, 0.0, 2.0 * PI, 1e-12).unwrap();
        assert!(r.value.norm() < 1e-12, "{}", r.value);
    }

    #[test]
    fn gaussian_fourier_transform() {
        let r = integrate_oscillatory(|x| C64::new((-x * x).exp(), 0.0), 50.0, -6.0, 6.0, 1e-12).unwrap();
        let exact = PI.sqrt() * (-2500.0f64 / 4.0).exp();
        assert!((r.value.re - exact).abs() < 1e-10 && r.value.im.abs() < 1e-10, "{}", r.value);
    }

    #[test]
    fn cost_grows_slowly_with_frequency() {
        let env = |x: f64| C64::new(1.0 / (1.0 + x * x), 0.0);
        let lo = integrate_oscillatory(env, 100.0, 0.0, 10.0, 1e-10).unwrap();
        let hi = integrate_oscillatory(env, 10000.0, 0.0, 10.0, 1e-10).unwrap();
        assert!(hi.evaluations <= 2 * lo.evaluations, "{} vs {}", hi.evaluations, lo.evaluations);
    }
}
