//! Truncated power series with real coefficients.
//!
//! Used both as Taylor jets (derivatives of a closed-form function at a
//! point) and as formal expansions in a small parameter.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    coeffs: Vec<f64>,
}

impl Series {
    /// Series of `order` (number of retained coefficients minus one).
    pub fn constant(value: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = value;
        Self { coeffs }
    }

    /// `value + x`: the independent variable shifted to `value`.
    pub fn variable(value: f64, order: usize) -> Self {
        let mut s = Self::constant(value, order);
        if order >= 1 {
            s.coeffs[1] = 1.0;
        }
        s
    }

    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> f64 {
        self.coeffs.get(n).copied().unwrap_or(0.0)
    }

    /// `n`-th derivative at the expansion point (`n! · a_n`).
    pub fn derivative(&self, n: usize) -> f64 {
        (1..=n).map(|k| k as f64).product::<f64>() * self.coeff(n)
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }

    pub fn add_constant(&self, value: f64) -> Self {
        let mut s = self.clone();
        s.coeffs[0] += value;
        s
    }

    pub fn exp(&self) -> Self {
        let n = self.coeffs.len();
        let a = &self.coeffs;
        let mut b = vec![0.0; n];
        b[0] = a[0].exp();
        for m in 1..n {
            let s: f64 = (1..=m).map(|k| k as f64 * a[k] * b[m - k]).sum();
            b[m] = s / m as f64;
        }
        Self { coeffs: b }
    }

    /// Natural logarithm; the constant term must be positive.
    pub fn ln(&self) -> Self {
        let n = self.coeffs.len();
        let a = &self.coeffs;
        assert!(a[0] > 0.0, "logarithm of a series needs a positive constant term");
        let mut b = vec![0.0; n];
        b[0] = a[0].ln();
        for m in 1..n {
            let s: f64 = (1..m).map(|k| k as f64 * b[k] * a[m - k]).sum();
            b[m] = (a[m] - s / m as f64) / a[0];
        }
        Self { coeffs: b }
    }

    /// Real power; the constant term must be positive.
    pub fn powf(&self, p: f64) -> Self {
        let n = self.coeffs.len();
        let a = &self.coeffs;
        assert!(a[0] > 0.0, "power of a series needs a positive constant term");
        let mut b = vec![0.0; n];
        b[0] = a[0].powf(p);
        for m in 1..n {
            let s: f64 = (1..=m)
                .map(|k| ((p + 1.0) * k as f64 - m as f64) * a[k] * b[m - k])
                .sum();
            b[m] = s / (m as f64 * a[0]);
        }
        Self { coeffs: b }
    }

    pub fn sqrt(&self) -> Self {
        self.powf(0.5)
    }

    pub fn recip(&self) -> Self {
        Series::constant(1.0, self.order()).div(self)
    }

    pub fn div(&self, other: &Series) -> Self {
        let n = self.coeffs.len().min(other.coeffs.len());
        let b = &other.coeffs;
        assert!(b[0] != 0.0, "division by a series with zero constant term");
        let mut c = vec![0.0; n];
        for m in 0..n {
            let s: f64 = (1..=m).map(|k| b[k] * c[m - k]).sum();
            c[m] = (self.coeffs[m] - s) / b[0];
        }
        Self { coeffs: c }
    }

    /// Drops the first `k` coefficients (division by `x^k` when they vanish).
    pub fn shift_down(&self, k: usize) -> Self {
        let mut coeffs: Vec<f64> = self.coeffs.iter().skip(k).copied().collect();
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    /// Evaluates the truncated series at `x`.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }
}

impl Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        let n = self.coeffs.len().min(rhs.coeffs.len());
        Series { coeffs: (0..n).map(|i| self.coeffs[i] + rhs.coeffs[i]).collect() }
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        let n = self.coeffs.len().min(rhs.coeffs.len());
        Series { coeffs: (0..n).map(|i| self.coeffs[i] - rhs.coeffs[i]).collect() }
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        let n = self.coeffs.len().min(rhs.coeffs.len());
        let mut c = vec![0.0; n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            for (j, b) in rhs.coeffs.iter().take(n - i).enumerate() {
                c[i + j] += a * b;
            }
        }
        Series { coeffs: c }
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.scale(-1.0)
    }
}
