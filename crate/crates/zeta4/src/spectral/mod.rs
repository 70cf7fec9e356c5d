//! Maass cusp-form data for the full modular group and the sums built from
//! it: smoothed Hecke series, the approximate functional equation for
//! `H_j(τ)`, the spectral part `S(T, σ; G)` and the averages of `H_j`.

mod afe;
mod dataset;
mod sums;

pub use afe::{afe_correction, hecke_series_smoothed, hecke_value, hecke_value_afe, DEFAULT_AFE_C};
pub use dataset::{
    load_spectral_dataset, load_spectral_dir, parse_spectral_dataset, HeckeTable, MaassFormRecord, Normalization,
    Parity, SpectralDataset, FORMS_FILE, HECKE_FILE,
};
pub use sums::{
    kappa_class_sums, nonvanishing_fraction, spectral_prefactor, spectral_sum_s, spectral_sum_with, spectral_term,
    theorem2_partial_sums, truncation_point, AverageVariant, SaddleForm, SpectralSum,
};

use thiserror::Error;

use crate::moments::MomentError;
use crate::numerics::NumericsError;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("{file}:{line}:{column}: {message}")]
    Parse { file: String, line: u64, column: usize, message: String },
    #[error("record {record} violates {invariant}: {detail}")]
    Invariant { record: usize, invariant: &'static str, detail: String },
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("insufficient Hecke data: {0}")]
    InsufficientData(String),
    #[error("outside the approximate functional equation regime: {0}")]
    Regime(String),
    #[error("record {0} has odd parity; its H_j is not available from the approximate functional equation")]
    Parity(usize),
    #[error("no value of H_{record}({at}) available")]
    MissingValue { record: usize, at: f64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Moment(#[from] MomentError),
}
