//! Prints the detrended, G-smoothed error term next to the spectral sum
//! S(T, σ; G) on [1000, 4000] and their Pearson correlation.
//!
//! cargo run --release -p zeta4 --example spectral_correlation [G] [step]

use std::path::PathBuf;

use zeta4::moments::{detrended_smoothed_error, pearson_correlation, MomentParameters};
use zeta4::spectral::{load_spectral_dir, spectral_sum_s};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let g: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(400.0);
    let step: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(50.0);
    let sigma = 0.6;
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/level1");
    let ds = load_spectral_dir(&dir, 150)?;

    let n = ((4000.0 - 1000.0) / step).round() as usize;
    let grid: Vec<f64> = (0..=n).map(|i| 1000.0 + step * i as f64).collect();
    let error = detrended_smoothed_error(sigma, g, &grid, 1e-10)?;
    let spectral = grid
        .iter()
        .map(|&t| Ok(spectral_sum_s(&MomentParameters::new(sigma, t, g)?, &ds)?.value))
        .collect::<Result<Vec<f64>, Box<dyn std::error::Error>>>()?;
    println!("T,E2_smoothed_detrended,S");
    for ((t, e), s) in error.iter().zip(&spectral) {
        println!("{t},{e:.6},{s:.6}");
    }
    let e: Vec<f64> = error.iter().map(|p| p.1).collect();
    println!("# pearson = {:.4}", pearson_correlation(&e, &spectral)?);
    Ok(())
}
