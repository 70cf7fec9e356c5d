//! Python bindings: `import zeta4py`.
//!
//! Library errors surface as `ValueError` for bad arguments and
//! `RuntimeError` for numerical failures.

use std::path::PathBuf;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use zeta4::hypergeom::{hyp2f1 as hyp2f1_route, HypParams};
use zeta4::lambda::{self, GaussianWeight, LambdaError};
use zeta4::moments::{self, MomentError, MomentParameters, SecondaryCoefficients};
use zeta4::spectral::{self, SpectralDataset, SpectralError};
use zeta4::zeta::{self as zeta_engine, ZetaConfig, ZetaError};
use zeta4::C64;

const HECKE_N_MAX: usize = 150;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn runtime_error(e: impl std::fmt::Display) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn zeta_err(e: ZetaError) -> PyErr {
    match e {
        ZetaError::Config(_) | ZetaError::OutOfWindow(_) | ZetaError::Pole | ZetaError::NearPole { .. } => value_error(e),
        ZetaError::Numerics(_) => runtime_error(e),
    }
}

fn moment_err(e: MomentError) -> PyErr {
    match e {
        MomentError::Precondition(_) | MomentError::NearThreeQuarters(_) | MomentError::Table(_) => value_error(e),
        MomentError::Zeta(z) => zeta_err(z),
        _ => runtime_error(e),
    }
}

fn lambda_err(e: LambdaError) -> PyErr {
    match e {
        LambdaError::Precondition(_) | LambdaError::Regime(_) => value_error(e),
        _ => runtime_error(e),
    }
}

fn spectral_err(e: SpectralError) -> PyErr {
    match e {
        SpectralError::Numerics(_) => runtime_error(e),
        SpectralError::Moment(m) => moment_err(m),
        _ => value_error(e),
    }
}

/// ζ(s) for complex `s`.
#[pyfunction]
fn zeta(s: C64) -> PyResult<C64> {
    zeta_engine::zeta(s, &ZetaConfig::default()).map_err(zeta_err)
}

/// ∫_0^T |ζ(σ+it)|⁴ dt (over [1, T] at σ = 1).
#[pyfunction]
#[pyo3(signature = (sigma, t, tol = 1e-10))]
fn sharp_fourth_moment(sigma: f64, t: f64, tol: f64) -> PyResult<f64> {
    zeta_engine::sharp_fourth_moment(sigma, t, tol).map(|r| r.value).map_err(zeta_err)
}

/// Main term with secondary coefficients `a = (a0, a1, a2)`.
#[pyfunction]
#[pyo3(signature = (t, sigma, a = (0.0, 0.0, 0.0)))]
fn main_term(t: f64, sigma: f64, a: (f64, f64, f64)) -> PyResult<f64> {
    let coeffs = SecondaryCoefficients { a: [a.0, a.1, a.2], ..SecondaryCoefficients::zero(sigma) };
    moments::main_term_for(t, sigma, &coeffs).map_err(moment_err)
}

/// Least-squares `(a0, a1, a2)` from `(T, sharp moment)` pairs.
#[pyfunction]
fn fit_secondary_coefficients(samples: Vec<(f64, f64)>, sigma: f64) -> PyResult<(f64, f64, f64)> {
    let c = moments::fit_secondary_coefficients(&samples, sigma).map_err(moment_err)?;
    Ok((c.a[0], c.a[1], c.a[2]))
}

/// `[(T, sharp, main, E2)]` along an increasing grid.
#[pyfunction]
#[pyo3(signature = (sigma, grid, a = (0.0, 0.0, 0.0), tol = 1e-10))]
fn error_term_series(sigma: f64, grid: Vec<f64>, a: (f64, f64, f64), tol: f64) -> PyResult<Vec<(f64, f64, f64, f64)>> {
    let coeffs = SecondaryCoefficients { a: [a.0, a.1, a.2], ..SecondaryCoefficients::zero(sigma) };
    let rows = moments::error_term_series(sigma, &grid, &coeffs, tol).map_err(moment_err)?;
    Ok(rows.into_iter().map(|s| (s.t, s.sharp_moment, s.main_term, s.e2)).collect())
}

/// I₂(T, σ; G), the Gaussian-weighted fourth moment.
#[pyfunction]
#[pyo3(signature = (sigma, t, g, tol = 1e-10))]
fn weighted_moment(sigma: f64, t: f64, g: f64, tol: f64) -> PyResult<f64> {
    let p = MomentParameters::new(sigma, t, g).map_err(moment_err)?;
    moments::weighted_moment_i2(&p, tol).map_err(moment_err)
}

/// 2F1(a, b; c; z).
#[pyfunction]
#[pyo3(signature = (a, b, c, z, tol = 1e-15))]
fn hyp2f1(a: C64, b: C64, c: C64, z: C64, tol: f64) -> PyResult<C64> {
    hyp2f1_route(&HypParams::new(a, b, c, z), tol).map_err(|e| value_error(e))
}

/// Λ(r; τ, g) by direct quadrature for the Gaussian weight centred at `t` with width `g`.
#[pyfunction]
#[pyo3(signature = (r, tau, t, g, tol = 1e-12))]
fn lambda_direct(r: f64, tau: f64, t: f64, g: f64, tol: f64) -> PyResult<f64> {
    let w = GaussianWeight::new(t, g).map_err(lambda_err)?;
    lambda::lambda_direct(r, tau, &w, tol).map(|v| v.value).map_err(lambda_err)
}

/// Saddle-point form of Λ; raises ValueError below the r = log T threshold.
#[pyfunction]
#[pyo3(signature = (r, tau, t, g, phase_order = 9))]
fn lambda_saddle(r: f64, tau: f64, t: f64, g: f64, phase_order: usize) -> PyResult<f64> {
    let w = GaussianWeight::new(t, g).map_err(lambda_err)?;
    lambda::lambda_saddle(r, tau, &w, phase_order).map(|v| v.value).map_err(lambda_err)
}

/// A loaded level-1 Maass form dataset.
#[pyclass(frozen)]
struct Dataset {
    inner: SpectralDataset,
}

#[pymethods]
impl Dataset {
    /// Reads `forms.csv` and `hecke.csv` from a directory.
    #[new]
    fn new(dir: PathBuf) -> PyResult<Self> {
        Ok(Self { inner: spectral::load_spectral_dir(&dir, HECKE_N_MAX).map_err(spectral_err)? })
    }

    fn __len__(&self) -> usize {
        self.inner.records.len()
    }

    /// Spectral parameters κ_j in increasing order.
    fn kappas(&self) -> Vec<f64> {
        self.inner.records.iter().map(|r| r.kappa).collect()
    }

    /// Central values H_j(1/2).
    fn central_values(&self) -> Vec<f64> {
        self.inner.records.iter().map(|r| r.central_value).collect()
    }

    /// S(T, σ; G) with the derived saddle point.
    fn spectral_sum(&self, sigma: f64, t: f64, g: f64) -> PyResult<f64> {
        let p = MomentParameters::new(sigma, t, g).map_err(moment_err)?;
        spectral::spectral_sum_s(&p, &self.inner).map(|s| s.value).map_err(spectral_err)
    }

    /// H_j(x) for the record at `index` (0-based), cached or via the approximate functional equation.
    fn hecke_value(&self, index: usize, x: f64) -> PyResult<f64> {
        let rec = self.inner.records.get(index).ok_or_else(|| value_error(format!("no record {index}")))?;
        spectral::hecke_value(rec, x).map_err(spectral_err)
    }
}

#[pymodule]
fn zeta4py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(zeta, m)?)?;
    m.add_function(wrap_pyfunction!(sharp_fourth_moment, m)?)?;
    m.add_function(wrap_pyfunction!(main_term, m)?)?;
    m.add_function(wrap_pyfunction!(fit_secondary_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(error_term_series, m)?)?;
    m.add_function(wrap_pyfunction!(weighted_moment, m)?)?;
    m.add_function(wrap_pyfunction!(hyp2f1, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_direct, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_saddle, m)?)?;
    m.add_class::<Dataset>()?;
    m.add("SADDLE_FRONT_CONSTANT", lambda::SADDLE_FRONT_CONSTANT)?;
    Ok(())
}
