use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn zeta4(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zeta4")).args(args).output().expect("binary runs")
}

fn dataset() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/level1").display().to_string()
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

/// Parsed CSV: header and rows of raw cells.
fn csv_rows(p: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = read(p);
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    (header, lines.map(|l| l.split(',').map(str::to_string).collect()).collect())
}

fn cell(header: &[String], row: &[String], name: &str) -> f64 {
    let i = header.iter().position(|h| h == name).unwrap();
    row[i].parse().unwrap_or_else(|_| panic!("column {name}: '{}'", row[i]))
}

fn leading(t: f64, sigma: f64) -> f64 {
    zeta4::moments::leading_terms(t, sigma).unwrap()
}

#[test]
fn empty_range_gives_header_only() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "m.csv");
    let o = zeta4(&["moment", "--t-from", "100", "--t-to", "100", "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(read(&out), "T,sigma,G,sharp_moment,main_term,E2,spectral_prediction\n");
    assert!(path(&dir, "m.config").exists());
}

#[test]
fn config_errors_exit_two_with_a_diagnostic_line() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "m.csv");
    for args in [
        vec!["moment", "--t-from", "10", "--t-to", "5", "--out", s(&out)],
        vec!["moment", "--t-to", "5", "--t-step", "0", "--out", s(&out)],
        vec!["moment", "--t-to", "5", "--g-exp", "0.2", "--out", s(&out)],
        vec!["moment", "--t-to", "5", "--sigma", "0.4", "--out", s(&out)],
        vec!["moment", "--t-to", "5"],
    ] {
        let o = zeta4(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&o.stderr);
        let line = err.lines().last().unwrap();
        assert!(line.starts_with("level=error command=moment code=2 message="), "{line}");
    }
}

#[test]
fn moment_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (path(&dir, "a.csv"), path(&dir, "b.csv"));
    for out in [&a, &b] {
        let o = zeta4(&["moment", "--sigma", "0.6", "--t-from", "0", "--t-to", "300", "--t-step", "25", "--out", s(out)]);
        assert!(o.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let (header, rows) = csv_rows(&a);
    assert_eq!(rows.len(), 12);
    for row in &rows {
        for name in ["T", "sharp_moment", "main_term", "E2"] {
            assert!(cell(&header, row, name).is_finite());
        }
    }
}

#[test]
fn sigma_one_single_point() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "one.csv");
    let o = zeta4(&["moment", "--sigma", "1", "--t-from", "1999", "--t-to", "2000", "--out", s(&out)]);
    assert!(o.status.success());
    let (header, rows) = csv_rows(&out);
    assert_eq!(rows.len(), 1);
    let t = cell(&header, &rows[0], "T");
    let v = cell(&header, &rows[0], "sharp_moment");
    assert_eq!(t, 2000.0);
    assert_eq!(v, zeta4::zeta::sharp_fourth_moment(1.0, 2000.0, 1e-10).unwrap().value);
    assert_eq!(cell(&header, &rows[0], "main_term"), leading(2000.0, 1.0));
    // mean value ζ⁴(2)/ζ(4) = 5π⁴/72 up to the O(log⁴ T) error term
    let constant = 5.0 * PI.powi(4) / 72.0;
    assert!((v / t - constant).abs() < t.ln().powi(4) / t);
}

#[test]
fn config_file_with_flag_override() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "m.csv");
    let cfg = path(&dir, "run.cfg");
    std::fs::write(&cfg, format!("# test run\nsigma = 0.7\nt-to = 40\nt-step = 20\nout = {}\n", s(&out))).unwrap();
    let o = zeta4(&["moment", "--config", s(&cfg), "--sigma", "0.65"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = csv_rows(&out);
    assert_eq!(rows.len(), 2);
    assert_eq!(cell(&header, &rows[0], "sigma"), 0.65);
    let resolved = read(&path(&dir, "m.config"));
    assert!(resolved.contains("sigma = 0.65\n"), "{resolved}");
    assert!(resolved.contains("t-to = 40\n"));

    // the resolved config reproduces the run byte for byte
    let first = std::fs::read(&out).unwrap();
    let replay = path(&dir, "replay.cfg");
    std::fs::copy(path(&dir, "m.config"), &replay).unwrap();
    assert!(zeta4(&["moment", "--config", s(&replay)]).status.success());
    assert_eq!(std::fs::read(&out).unwrap(), first);

    std::fs::write(&cfg, "sigma = 0.7\nwidth = 3\n").unwrap();
    assert_eq!(zeta4(&["moment", "--config", s(&cfg), "--out", s(&out)]).status.code(), Some(2));
}

fn synthetic_table(p: &Path, sigma: f64, exponent: f64, a: [f64; 3]) {
    let mut text = String::from("T,sigma,G,sharp_moment,main_term,E2,spectral_prediction\n");
    for k in 0..=45 {
        let t = 100.0 + 20.0 * k as f64;
        let l: f64 = t.ln();
        let sharp = leading(t, sigma) + t.powf(exponent) * (a[0] + a[1] * l + a[2] * l * l);
        text.push_str(&format!("{t},{sigma},,{sharp},0,{sharp},\n"));
    }
    std::fs::write(p, text).unwrap();
}

fn read_coeffs(p: &Path) -> Vec<f64> {
    let (_, rows) = csv_rows(p);
    rows[0].iter().map(|c| c.parse().unwrap()).collect()
}

#[test]
fn error_term_recovers_synthetic_coefficients() {
    let dir = TempDir::new().unwrap();
    for (sigma, exponent) in [(0.6, 0.8), (0.75, 0.5)] {
        let input = path(&dir, "synthetic.csv");
        let out = path(&dir, "e2.csv");
        let a = [3.5, -1.25, 0.125];
        synthetic_table(&input, sigma, exponent, a);
        let sigma_arg = sigma.to_string();
        let o = zeta4(&["error-term", "--sigma", &sigma_arg, "--input", s(&input), "--out", s(&out)]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let c = read_coeffs(&path(&dir, "e2.coeffs.csv"));
        for j in 0..3 {
            assert!((c[1 + j] - a[j]).abs() < 1e-6 * (1.0 + a[j].abs()), "σ = {sigma}: a{j} = {}", c[1 + j]);
        }
        assert_eq!((c[7], c[8]), (100.0, 1000.0));
        let (header, rows) = csv_rows(&out);
        assert_eq!(rows.len(), 46);
        for row in &rows {
            let sharp = cell(&header, row, "sharp_moment");
            assert!(cell(&header, row, "E2").abs() < 1e-8 * sharp);
        }
        assert!(read(&path(&dir, "e2.summary")).contains("rows = 46"));
    }
}

#[test]
fn fit_command_writes_coefficients_only() {
    let dir = TempDir::new().unwrap();
    let input = path(&dir, "synthetic.csv");
    let out = path(&dir, "c.csv");
    synthetic_table(&input, 0.6, 0.8, [1.0, 2.0, -0.5]);
    let o = zeta4(&["fit", "--sigma", "0.6", "--input", s(&input), "--fit-from", "300", "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let c = read_coeffs(&out);
    assert!((c[1] - 1.0).abs() < 1e-6 && (c[2] - 2.0).abs() < 1e-6 && (c[3] + 0.5).abs() < 1e-6);
    assert_eq!((c[7], c[8]), (300.0, 1000.0));
    let o = zeta4(&["fit", "--sigma", "0.7", "--input", s(&input), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(2), "sigma mismatch with the table");
}

#[test]
fn real_error_term_run_reports_growth_consistently_with_plot() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "e2.csv");
    let o = zeta4(&[
        "error-term", "--sigma", "0.6", "--t-from", "250", "--t-to", "1200", "--t-step", "5", "--fit-from", "100",
        "--fit-to", "250", "--fit-step", "5", "--out", s(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary = read(&path(&dir, "e2.summary"));
    let slope_line = summary.lines().find(|l| l.starts_with("growth_slope = ")).unwrap();
    let slope: f64 = slope_line["growth_slope = ".len()..].parse().unwrap();
    assert!(slope.is_finite());
    assert!(summary.contains("sign_changes_255_510 = "));

    let svg = path(&dir, "e2.svg");
    let o = zeta4(&["plot", "--input", s(&out), "--kind", "loglog", "--out", s(&svg)]);
    assert!(o.status.success());
    let half = summary.lines().find_map(|l| l.strip_prefix("growth_half_width = ")).unwrap();
    assert!(read(&svg).contains(&format!("slope = {slope} ± {half}")));
}

#[test]
fn lambda_compare_rows() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "l.csv");
    let o = zeta4(&[
        "lambda-compare", "--sigma", "0.6", "--t-to", "10000", "--g-exp", "0.6", "--r", "5,20,40,80", "--out", s(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = csv_rows(&out);
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0][4], "fallback");
    assert!((cell(&header, &rows[0], "bound") - 1e4f64.powf(0.5 - 1.2)).abs() < 1e-15);
    let devs: Vec<f64> = rows[1..4].iter().map(|r| cell(&header, r, "rel_deviation")).collect();
    assert!(devs.windows(2).all(|w| w[1] < w[0]), "{devs:?}");
    assert_eq!(rows[4][4], "summary");
    assert_eq!(rows[4][6], "monotone_decreasing=true");

    let o = zeta4(&["lambda-compare", "--sigma", "0.6", "--t-to", "10000", "--g-exp", "0.6", "--r", "40", "--out", s(&out)]);
    assert!(o.status.success());
    assert_eq!(csv_rows(&out).1.len(), 1, "single r: no trend row");
}

#[test]
fn spectral_requires_a_dataset() {
    let dir = TempDir::new().unwrap();
    let o = zeta4(&["spectral", "--g", "400", "--t-to", "1200", "--out", s(&path(&dir, "s.csv"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--dataset"));
    let o = zeta4(&["spectral", "--dataset", s(dir.path()), "--g", "400", "--t-to", "1200", "--out", s(&path(&dir, "s.csv"))]);
    assert_eq!(o.status.code(), Some(2), "directory without forms.csv");
}

#[test]
fn spectral_tables() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "s.csv");
    let ds = dataset();
    let args = [
        "spectral", "--dataset", &ds, "--sigma", "0.6", "--g", "400", "--t-from", "900", "--t-to", "1500", "--t-step",
        "100", "--k", "15,25,35", "--out", s(&out),
    ];
    let o = zeta4(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let first = std::fs::read(&out).unwrap();
    assert!(zeta4(&args).status.success());
    assert_eq!(std::fs::read(&out).unwrap(), first);

    let (header, rows) = csv_rows(&out);
    assert_eq!(rows.len(), 6);
    for row in &rows {
        let c = cell(&header, row, "coverage");
        assert!((0.0..=1.0).contains(&c));
        assert!(cell(&header, row, "S").is_finite());
    }
    let (t2_header, t2) = csv_rows(&path(&dir, "s.theorem2.csv"));
    assert_eq!(t2.len(), 3);
    for row in &t2 {
        let k = cell(&t2_header, row, "K");
        let ratio = cell(&t2_header, row, "ratio_central_square");
        let sum = cell(&t2_header, row, "sum_central_square");
        let main = cell(&t2_header, row, "main_central_square");
        assert!((ratio - sum / main).abs() < 1e-15 * ratio.abs().max(1.0));
        assert!(sum >= 0.0 && main > 0.0 && k > 0.0);
        assert!(cell(&t2_header, row, "ratio_square_shifted").is_finite());
    }
    let summary = read(&path(&dir, "s.summary"));
    assert!(summary.contains("forms = 65"));
    assert!(summary.contains("theorem2_caveat = "));
}

#[test]
fn spectral_correlates_against_an_input_table() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "s.csv");
    let e2 = path(&dir, "e2.csv");
    let mut text = String::from("T,E2\n");
    for k in 1..=6 {
        text.push_str(&format!("{},{}\n", 900 + 100 * k, k * k));
    }
    std::fs::write(&e2, text).unwrap();
    let ds = dataset();
    let o = zeta4(&[
        "spectral", "--dataset", &ds, "--sigma", "0.6", "--g", "400", "--t-from", "900", "--t-to", "1500", "--t-step",
        "100", "--input", s(&e2), "--out", s(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary = read(&path(&dir, "s.summary"));
    assert!(summary.contains("correlation_points = 6"));
    let r: f64 = summary.lines().find_map(|l| l.strip_prefix("pearson = ")).unwrap().parse().unwrap();
    assert!((-1.0..=1.0).contains(&r));
    let (header, rows) = csv_rows(&out);
    assert_eq!(cell(&header, &rows[2], "E2"), 9.0);
}

#[test]
fn plots() {
    let dir = TempDir::new().unwrap();
    let empty = path(&dir, "empty.csv");
    std::fs::write(&empty, "T,E2\n").unwrap();
    for kind in ["series", "loglog", "scatter"] {
        let svg = path(&dir, &format!("{kind}.svg"));
        let o = zeta4(&["plot", "--input", s(&empty), "--kind", kind, "--out", s(&svg)]);
        assert!(o.status.success(), "{kind}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(read(&svg).starts_with("<svg"));
    }

    let table = path(&dir, "t.csv");
    std::fs::write(&table, "T,E2\n1,2\n2,-1\n3,0.5\n").unwrap();
    let before = std::fs::read(&table).unwrap();
    let svg = path(&dir, "series.svg");
    assert!(zeta4(&["plot", "--input", s(&table), "--out", s(&svg)]).status.success());
    let first = read(&svg);
    // data line plus the zero line
    assert!(first.matches("<polyline").count() >= 2, "{first}");
    assert!(zeta4(&["plot", "--input", s(&table), "--out", s(&svg)]).status.success());
    assert_eq!(read(&svg), first);
    assert_eq!(std::fs::read(&table).unwrap(), before);

    std::fs::write(&table, "T,E2\n1,oops\n").unwrap();
    assert_eq!(zeta4(&["plot", "--input", s(&table), "--out", s(&svg)]).status.code(), Some(2));
    assert_eq!(zeta4(&["plot", "--input", s(&table), "--kind", "pie", "--out", s(&svg)]).status.code(), Some(2));
}
