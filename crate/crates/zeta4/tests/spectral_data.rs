use std::path::PathBuf;

use zeta4::spectral::{
    hecke_series_smoothed, hecke_value_afe, kappa_class_sums, load_spectral_dir, nonvanishing_fraction,
    theorem2_partial_sums, AverageVariant, Parity, SpectralDataset,
};

fn dataset() -> SpectralDataset {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/level1");
    load_spectral_dir(&dir, 150).expect("level-1 dataset loads")
}

#[test]
fn first_eigenvalue_and_ordering() {
    let ds = dataset();
    assert_eq!(ds.records.len(), 65);
    assert!((ds.records[0].kappa - 9.53369526135).abs() < 1e-9);
    assert!((ds.records[1].kappa - 12.17300832468).abs() < 1e-9);
    assert!(ds.records.windows(2).all(|w| w[0].kappa < w[1].kappa));
    assert!(ds.provenance.contains("tools/hejhal.py"));
}

#[test]
fn integrity_on_load() {
    for rec in &dataset().records {
        assert_eq!(rec.hecke.get(1), Some(1.0));
        assert!(rec.hecke.multiplicativity_residual() < 1e-8, "record {}", rec.index);
        assert!(rec.central_value >= 0.0);
        if rec.parity == Parity::Odd {
            assert_eq!(rec.central_value, 0.0);
        }
    }
}

#[test]
fn afe_matches_shipped_values() {
    let ds = dataset();
    for rec in ds.records.iter().filter(|r| r.parity == Parity::Even) {
        for tau in [0.6, 0.7, 0.9] {
            let shipped = rec.cached_value(tau).unwrap();
            let afe = hecke_value_afe(rec, tau, rec.kappa, 4.0).unwrap();
            assert!((afe - shipped).abs() < 1e-4 * shipped.abs(), "j = {}, τ = {tau}: {afe} vs {shipped}", rec.index);
        }
    }
}

#[test]
fn afe_is_stable_under_k_perturbation() {
    let ds = dataset();
    for rec in ds.records.iter().filter(|r| r.parity == Parity::Even) {
        let k = rec.kappa;
        let a = hecke_value_afe(rec, 0.6, k, 4.0).unwrap();
        let b = hecke_value_afe(rec, 0.6, 1.1 * k, 4.0).unwrap();
        assert!((a - b).abs() < (1.0 / k).max(1e-6), "j = {}: {a} vs {b}", rec.index);
    }
}

#[test]
fn smoothed_series_near_the_edge_of_the_strip() {
    let ds = dataset();
    for rec in ds.records.iter().filter(|r| r.parity == Parity::Even).take(4) {
        let k = 50.0;
        let smoothed = hecke_series_smoothed(rec, 0.9, k, 4.0 * f64::ln(k)).unwrap();
        let afe = hecke_value_afe(rec, 0.9, rec.kappa, 4.0).unwrap();
        // 3K is capped by the shipped Hecke range (n <= 150), so K = 50 is the largest usable cutoff
        assert!((smoothed - afe).abs() < 2e-3 * afe.abs(), "j = {}: {smoothed} vs {afe}", rec.index);
    }
}

#[test]
fn odd_forms_have_small_smoothed_central_sums() {
    let ds = dataset();
    let rec = &ds.records[0];
    assert_eq!(rec.parity, Parity::Odd);
    let sums: Vec<f64> =
        [10.0, 20.0, 40.0].iter().map(|&k| hecke_series_smoothed(rec, 0.5, k, 4.0 * f64::ln(k)).unwrap().abs()).collect();
    assert!(sums[0] < 1e-2 && sums[1] < sums[0] && sums[2] < sums[1], "{sums:?}");
}

#[test]
fn spectral_averages_report() {
    let ds = dataset();
    for k in [15.0, 20.0, 25.0, 30.0, 35.0, 39.8] {
        let (l1, r1) = theorem2_partial_sums(&ds, 0.6, k, AverageVariant::CentralTimesSquare).unwrap();
        let (l2, r2) = theorem2_partial_sums(&ds, 0.6, k, AverageVariant::SquareTimesShifted).unwrap();
        assert!(l1 >= 0.0 && l2 >= 0.0);
        eprintln!("K={k} ratio_4.2={:.4} ratio_4.3={:.4}", l1 / r1, l2 / r2);
    }
    let (l, n) = kappa_class_sums(&ds, 0.7, ds.records[2].kappa).unwrap();
    let rec = &ds.records[2];
    let h = rec.cached_value(0.7).unwrap();
    assert!((l - rec.alpha * rec.central_value.powi(2) * h).abs() < 1e-12 * l);
    assert!((n - rec.alpha * rec.central_value * h * h).abs() < 1e-12 * n);
    eprintln!("nonvanishing fraction (σ = 0.7, κ ≤ 40): {}", nonvanishing_fraction(&ds, 0.7, 40.0).unwrap());
}
