//! Fits the front constant of the saddle-point kernel against direct
//! quadrature and prints the route deviation on the check grid.
//!
//! `cargo run --release -p zeta4 --example calibrate_saddle`

use zeta4::lambda::{
    lambda_direct, lambda_saddle_with, GaussianWeight, DEFAULT_CORRECTION_ORDER, NOMINAL_FRONT_CONSTANT,
    SADDLE_FRONT_CONSTANT,
};

const TAU: f64 = 0.6;
const PHASE_ORDER: usize = 9;
const TOL: f64 = 1e-13;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let w = GaussianWeight::with_width_exponent(1e4, 0.6)?;
    let grid: Vec<f64> = (0..=8).map(|i| 159.0 + 0.25 * i as f64).collect();
    for corrections in [DEFAULT_CORRECTION_ORDER] {
        // saddle values are proportional to the front constant
        let (mut num, mut den) = (0.0, 0.0);
        for &r in &grid {
            let direct = lambda_direct(r, TAU, &w, TOL)?.value;
            let shape = lambda_saddle_with(r, TAU, &w, PHASE_ORDER, corrections)?.value / SADDLE_FRONT_CONSTANT;
            num += direct * shape;
            den += shape * shape;
        }
        let fitted = num / den;
        println!(
            "corrections={corrections} fitted={fitted:.16} ratio_to_nominal={:.12}",
            fitted / NOMINAL_FRONT_CONSTANT
        );
        for r in [20.0, 40.0, 80.0, 160.0] {
            let direct = lambda_direct(r, TAU, &w, TOL)?.value;
            let saddle = lambda_saddle_with(r, TAU, &w, PHASE_ORDER, corrections)?;
            let calibrated = saddle.value / SADDLE_FRONT_CONSTANT * fitted;
            println!(
                "  r={r:>5} direct={direct:.12e} saddle={calibrated:.12e} deviation={:.3e} error_estimate={:.3e}",
                ((calibrated - direct) / direct).abs(),
                saddle.error_estimate
            );
        }
    }
    println!("default correction order: {DEFAULT_CORRECTION_ORDER}");
    Ok(())
}
