use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use super::SpectralError;

/// File names used inside a dataset directory.
pub const FORMS_FILE: &str = "forms.csv";
pub const HECKE_FILE: &str = "hecke.csv";

/// How the `alpha` column of a forms file is to be read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// `alpha` already holds `|ρ_j(1)|² / cosh(π κ_j)`.
    Hecke,
    /// `alpha` holds `|ρ_j(1)|²`; divided by `cosh(π κ_j)` on load.
    Rho1,
}

impl Normalization {
    fn parse(name: &str) -> Option<Self> {
        match name {
            "hecke" => Some(Self::Hecke),
            "rho1" => Some(Self::Rho1),
            _ => None,
        }
    }

    fn alpha(self, raw: f64, kappa: f64) -> f64 {
        match self {
            Self::Hecke => raw,
            Self::Rho1 => raw / (PI * kappa).cosh(),
        }
    }
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Hecke => "hecke",
            Self::Rho1 => "rho1",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> i32 {
        match self {
            Self::Even => 1,
            Self::Odd => -1,
        }
    }
}

/// `t_j(n)` for `1 <= n <= n_max`, remembering which entries came from the
/// file and which were built from the Hecke relations.
#[derive(Debug, Clone, PartialEq)]
pub struct HeckeTable {
    values: Vec<f64>,
    shipped: Vec<bool>,
}

impl HeckeTable {
    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, n: usize) -> Option<f64> {
        (n >= 1).then(|| self.values.get(n).copied()).flatten()
    }

    /// Whether `t(n)` was read from the file rather than synthesized.
    pub fn is_shipped(&self, n: usize) -> bool {
        self.shipped.get(n).copied().unwrap_or(false)
    }

    /// Number of prime powers that had to be synthesized.
    pub fn synthesized_prime_powers(&self) -> usize {
        (2..=self.n_max()).filter(|&n| prime_power_base(n).is_some() && !self.shipped[n]).count()
    }

    /// Builds the full table from shipped values; composites are filled
    /// multiplicatively and missing prime powers by
    /// `t(p^{k+1}) = t(p) t(p^k) - t(p^{k-1})`.
    pub fn from_shipped(shipped: &BTreeMap<usize, f64>, n_max: usize) -> Result<Self, String> {
        let mut values = vec![f64::NAN; n_max + 1];
        let mut flags = vec![false; n_max + 1];
        for (&n, &v) in shipped.range(1..=n_max) {
            values[n] = v;
            flags[n] = true;
        }
        if n_max >= 1 && !flags[1] {
            values[1] = 1.0;
        }
        for p in primes_upto(n_max) {
            if !flags[p] {
                return Err(format!("t({p}) missing"));
            }
            let (mut prev, mut cur, mut q) = (1.0, values[p], p);
            while let Some(next) = q.checked_mul(p).filter(|&n| n <= n_max) {
                if !flags[next] {
                    values[next] = values[p] * cur - prev;
                }
                prev = cur;
                cur = values[next];
                q = next;
            }
        }
        for n in 2..=n_max {
            if flags[n] || prime_power_base(n).is_some() {
                continue;
            }
            let p = smallest_prime_factor(n);
            let mut q = p;
            while (n / q) % p == 0 {
                q *= p;
            }
            values[n] = values[q] * values[n / q];
        }
        Ok(Self { values, shipped: flags })
    }

    /// Largest `|t(m)t(n) - Σ_{d | (m,n)} t(mn/d²)|` over `2 <= m <= n`, `mn <= n_max`.
    pub fn multiplicativity_residual(&self) -> f64 {
        let n_max = self.n_max();
        let mut worst: f64 = 0.0;
        for m in 2..=n_max {
            for n in m..=n_max / m {
                let g = gcd(m, n);
                let rhs: f64 = (1..=g).filter(|d| g % d == 0).map(|d| self.values[m * n / (d * d)]).sum();
                worst = worst.max((self.values[m] * self.values[n] - rhs).abs());
            }
        }
        worst
    }
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn smallest_prime_factor(n: usize) -> usize {
    (2..).take_while(|d| d * d <= n).find(|d| n % d == 0).unwrap_or(n)
}

fn prime_power_base(n: usize) -> Option<usize> {
    if n < 2 {
        return None;
    }
    let p = smallest_prime_factor(n);
    let mut m = n;
    while m % p == 0 {
        m /= p;
    }
    (m == 1).then_some(p)
}

fn primes_upto(n: usize) -> impl Iterator<Item = usize> {
    (2..=n).filter(|&k| smallest_prime_factor(k) == k)
}

/// One Maass cusp form `u_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct MaassFormRecord {
    pub index: usize,
    pub kappa: f64,
    pub parity: Parity,
    /// `|ρ_j(1)|² / cosh(π κ_j)`.
    pub alpha: f64,
    pub hecke: HeckeTable,
    /// `H_j(1/2)`.
    pub central_value: f64,
    /// `(x, H_j(x))` pairs shipped with the data, sorted by `x`.
    pub cached: Vec<(f64, f64)>,
}

impl MaassFormRecord {
    /// Shipped value of `H_j(x)`, matched to 1e-9.
    pub fn cached_value(&self, x: f64) -> Option<f64> {
        if (x - 0.5).abs() < 1e-9 {
            return Some(self.central_value);
        }
        self.cached.iter().find(|(s, _)| (s - x).abs() < 1e-9).map(|&(_, v)| v)
    }

    fn validate(&self) -> Result<(), SpectralError> {
        let fail = |invariant, detail: String| Err(SpectralError::Invariant { record: self.index, invariant, detail });
        if !(self.kappa > 0.0 && self.kappa.is_finite()) {
            return fail("kappa > 0", format!("κ = {}", self.kappa));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return fail("alpha > 0", format!("α = {}", self.alpha));
        }
        if self.hecke.get(1).is_some_and(|t1| (t1 - 1.0).abs() > 1e-12) {
            return fail("t(1) = 1", format!("t(1) = {}", self.hecke.values[1]));
        }
        let residual = self.hecke.multiplicativity_residual();
        if !(residual < 1e-8) {
            return fail("Hecke multiplicativity", format!("residual {residual:e}"));
        }
        if self.parity == Parity::Odd && self.central_value != 0.0 {
            return fail("parity vanishing", format!("ε = -1 but H(1/2) = {}", self.central_value));
        }
        if !(self.central_value >= 0.0) {
            return fail("nonnegative central value", format!("H(1/2) = {}", self.central_value));
        }
        Ok(())
    }
}

/// Validated Maass-form records sorted by `κ_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDataset {
    pub records: Vec<MaassFormRecord>,
    pub n_max: usize,
    pub normalization: Normalization,
    pub provenance: String,
}

impl SpectralDataset {
    pub fn max_kappa(&self) -> f64 {
        self.records.last().map_or(0.0, |r| r.kappa)
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

struct Preamble {
    normalization: Option<Normalization>,
    provenance: String,
}

fn preamble(text: &str, file: &str) -> Result<Preamble, SpectralError> {
    let mut out = Preamble { normalization: None, provenance: String::new() };
    for (i, line) in text.lines().enumerate() {
        let Some(comment) = line.strip_prefix('#') else { break };
        let Some((key, value)) = comment.trim().split_once('=') else { continue };
        match key.trim() {
            "normalization" => {
                let name = value.trim();
                out.normalization = Some(Normalization::parse(name).ok_or_else(|| SpectralError::Parse {
                    file: file.to_string(),
                    line: i as u64 + 1,
                    column: 1,
                    message: format!("unknown normalization '{name}'"),
                })?);
            }
            "provenance" => out.provenance = value.trim().to_string(),
            _ => {}
        }
    }
    Ok(out)
}

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(text.as_bytes())
}

fn csv_error(file: &str, e: csv::Error) -> SpectralError {
    let line = e.position().map_or(0, |p| p.line());
    SpectralError::Parse { file: file.to_string(), line, column: 0, message: e.to_string() }
}

fn parse_cell<T: std::str::FromStr>(file: &str, record: &csv::StringRecord, column: usize) -> Result<T, SpectralError>
where
    T::Err: fmt::Display,
{
    let line = record.position().map_or(0, |p| p.line());
    let cell = record.get(column).ok_or_else(|| SpectralError::Parse {
        file: file.to_string(),
        line,
        column: column + 1,
        message: "missing field".into(),
    })?;
    cell.parse().map_err(|e: T::Err| SpectralError::Parse {
        file: file.to_string(),
        line,
        column: column + 1,
        message: format!("'{cell}': {e}"),
    })
}

/// Parses the forms and Hecke files from memory.  Either text may be empty.
pub fn parse_spectral_dataset(forms: &str, hecke: &str, n_max: usize) -> Result<SpectralDataset, SpectralError> {
    const FORMS: &str = "forms";
    const HECKE: &str = "hecke";
    let head = preamble(forms, FORMS)?;
    let hecke_head = preamble(hecke, HECKE)?;
    let normalization = head.normalization.unwrap_or(Normalization::Hecke);
    if let Some(other) = hecke_head.normalization.filter(|&n| n != normalization) {
        return Err(SpectralError::Parse {
            file: HECKE.into(),
            line: 1,
            column: 1,
            message: format!("normalization {other} differs from the forms file ({normalization})"),
        });
    }

    let mut shipped: BTreeMap<usize, BTreeMap<usize, f64>> = BTreeMap::new();
    if !hecke.trim().is_empty() {
        let mut rdr = reader(hecke);
        for row in rdr.records() {
            let row = row.map_err(|e| csv_error(HECKE, e))?;
            let j: usize = parse_cell(HECKE, &row, 0)?;
            let n: usize = parse_cell(HECKE, &row, 1)?;
            let t: f64 = parse_cell(HECKE, &row, 2)?;
            shipped.entry(j).or_default().insert(n, t);
        }
    }

    let mut records = Vec::new();
    if !forms.lines().all(|l| l.trim().is_empty() || l.starts_with('#')) {
        let mut rdr = reader(forms);
        let header = rdr.headers().map_err(|e| csv_error(FORMS, e))?.clone();
        let expected = ["j", "kappa", "epsilon", "alpha", "H_half"];
        if header.len() < expected.len() || header.iter().zip(expected).any(|(a, b)| a != b) {
            return Err(SpectralError::Parse {
                file: FORMS.into(),
                line: 1,
                column: 1,
                message: format!("header must start with {}", expected.join(",")),
            });
        }
        let mut cached_at = Vec::new();
        for (k, name) in header.iter().enumerate().skip(expected.len()) {
            let x = name.strip_prefix("H_").and_then(|s| s.parse::<f64>().ok()).ok_or_else(|| SpectralError::Parse {
                file: FORMS.into(),
                line: 1,
                column: k + 1,
                message: format!("column '{name}' is not of the form H_<x>"),
            })?;
            cached_at.push(x);
        }
        for row in rdr.records() {
            let row = row.map_err(|e| csv_error(FORMS, e))?;
            let index: usize = parse_cell(FORMS, &row, 0)?;
            let kappa: f64 = parse_cell(FORMS, &row, 1)?;
            let epsilon: i32 = parse_cell(FORMS, &row, 2)?;
            let parity = match epsilon {
                1 => Parity::Even,
                -1 => Parity::Odd,
                _ => {
                    return Err(SpectralError::Parse {
                        file: FORMS.into(),
                        line: row.position().map_or(0, |p| p.line()),
                        column: 3,
                        message: format!("epsilon must be ±1, got {epsilon}"),
                    })
                }
            };
            let raw_alpha: f64 = parse_cell(FORMS, &row, 3)?;
            let central_value: f64 = parse_cell(FORMS, &row, 4)?;
            let mut cached = Vec::with_capacity(cached_at.len());
            for (k, &x) in cached_at.iter().enumerate() {
                cached.push((x, parse_cell(FORMS, &row, expected.len() + k)?));
            }
            cached.sort_by(|a, b| a.0.total_cmp(&b.0));
            let hecke = HeckeTable::from_shipped(shipped.get(&index).unwrap_or(&BTreeMap::new()), n_max)
                .map_err(|detail| SpectralError::Invariant { record: index, invariant: "Hecke data coverage", detail })?;
            let record = MaassFormRecord {
                index,
                kappa,
                parity,
                alpha: normalization.alpha(raw_alpha, kappa),
                hecke,
                central_value,
                cached,
            };
            record.validate()?;
            if let Some(prev) = records.last().map(|r: &MaassFormRecord| r.kappa) {
                if !(kappa > prev) {
                    return Err(SpectralError::Invariant {
                        record: index,
                        invariant: "kappa strictly increasing",
                        detail: format!("κ = {kappa} after {prev}"),
                    });
                }
            }
            records.push(record);
        }
    }
    Ok(SpectralDataset { records, n_max, normalization, provenance: head.provenance })
}

fn read(path: &Path) -> Result<String, SpectralError> {
    std::fs::read_to_string(path).map_err(|source| SpectralError::Io { path: path.display().to_string(), source })
}

/// Loads a forms file and its Hecke file, keeping `t_j(n)` for `n <= n_max`.
pub fn load_spectral_dataset(forms: &Path, hecke: &Path, n_max: usize) -> Result<SpectralDataset, SpectralError> {
    parse_spectral_dataset(&read(forms)?, &read(hecke)?, n_max).map_err(|e| match e {
        SpectralError::Parse { file, line, column, message } => {
            let path = if file == "forms" { forms } else { hecke };
            SpectralError::Parse { file: path.display().to_string(), line, column, message }
        }
        other => other,
    })
}

/// Loads `forms.csv` and `hecke.csv` from a directory.
pub fn load_spectral_dir(dir: &Path, n_max: usize) -> Result<SpectralDataset, SpectralError> {
    load_spectral_dataset(&dir.join(FORMS_FILE), &dir.join(HECKE_FILE), n_max)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Ramanujan-like toy eigenvalues: t(p) = 2cos θ_p gives t(p^k) = sin((k+1)θ)/sin θ.
    fn toy_hecke(j: usize, n_max: usize) -> String {
        let mut s = String::from("j,n,t\n");
        for p in primes_upto(n_max) {
            let theta = 0.3 + p as f64 * 0.7;
            let mut q = p;
            let mut k = 1;
            loop {
                let t = ((k + 1) as f64 * theta).sin() / theta.sin();
                s.push_str(&format!("{j},{q},{t:.17e}\n"));
                match q.checked_mul(p).filter(|&n| n <= n_max) {
                    Some(n) => q = n,
                    None => break,
                }
                k += 1;
            }
        }
        s
    }

    #[test]
    fn empty_files_give_empty_dataset() {
        let ds = parse_spectral_dataset("", "", 50).unwrap();
        assert!(ds.is_empty());
        let ds = parse_spectral_dataset("# normalization=hecke\nj,kappa,epsilon,alpha,H_half\n", "", 50).unwrap();
        assert!(ds.is_empty());
    }

    #[test]
    fn loads_and_synthesizes_composites() {
        let forms = "# normalization=hecke\nj,kappa,epsilon,alpha,H_half,H_0.7\n1,9.5,1,1.5,2.0,1.25\n";
        let ds = parse_spectral_dataset(forms, &toy_hecke(1, 60), 60).unwrap();
        let rec = &ds.records[0];
        let t = |n| rec.hecke.get(n).unwrap();
        assert!((t(6) - t(2) * t(3)).abs() < 1e-15);
        assert!((t(60) - t(4) * t(3) * t(5)).abs() < 1e-12);
        assert!(!rec.hecke.is_shipped(6) && rec.hecke.is_shipped(4));
        assert_eq!(rec.cached_value(0.7), Some(1.25));
        assert_eq!(rec.cached_value(0.5), Some(2.0));
        assert_eq!(rec.cached_value(0.8), None);
    }

    #[test]
    fn missing_prime_power_is_synthesized_and_flagged() {
        let hecke: String = toy_hecke(1, 30).lines().filter(|l| !l.starts_with("1,8,")).map(|l| format!("{l}\n")).collect();
        let forms = "j,kappa,epsilon,alpha,H_half\n1,9.5,1,1.5,2.0\n";
        let full = parse_spectral_dataset(forms, &toy_hecke(1, 30), 30).unwrap();
        let ds = parse_spectral_dataset(forms, &hecke, 30).unwrap();
        let rec = &ds.records[0];
        assert!(!rec.hecke.is_shipped(8));
        assert_eq!(rec.hecke.synthesized_prime_powers(), 1);
        assert!((rec.hecke.get(8).unwrap() - full.records[0].hecke.get(8).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn rejects_odd_form_with_central_value() {
        let forms = "j,kappa,epsilon,alpha,H_half\n1,9.5,-1,1.5,0.1\n";
        match parse_spectral_dataset(forms, &toy_hecke(1, 20), 20) {
            Err(SpectralError::Invariant { record: 1, invariant, .. }) => assert_eq!(invariant, "parity vanishing"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_broken_multiplicativity_and_negative_central_value() {
        let forms = "j,kappa,epsilon,alpha,H_half\n1,9.5,1,1.5,1.0\n";
        let mut lines: Vec<String> = toy_hecke(1, 20).lines().map(String::from).collect();
        for l in lines.iter_mut() {
            if l.starts_with("1,4,") {
                *l = "1,4,0.123".into();
            }
        }
        let bad = lines.join("\n");
        assert!(matches!(
            parse_spectral_dataset(forms, &bad, 20),
            Err(SpectralError::Invariant { invariant: "Hecke multiplicativity", .. })
        ));
        let negative = "j,kappa,epsilon,alpha,H_half\n1,9.5,1,1.5,-0.2\n";
        assert!(matches!(
            parse_spectral_dataset(negative, &toy_hecke(1, 20), 20),
            Err(SpectralError::Invariant { invariant: "nonnegative central value", .. })
        ));
    }

    #[test]
    fn parse_errors_carry_position() {
        let forms = "j,kappa,epsilon,alpha,H_half\n1,9.5,1,oops,1.0\n";
        match parse_spectral_dataset(forms, "", 1) {
            Err(SpectralError::Parse { line, column, .. }) => assert_eq!((line, column), (2, 4)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rho1_normalization_divides_by_cosh() {
        let forms = "# normalization=rho1\nj,kappa,epsilon,alpha,H_half\n1,2.0,1,10.0,1.0\n";
        let hecke = "# normalization=rho1\nj,n,t\n1,2,0.5\n";
        let ds = parse_spectral_dataset(forms, hecke, 2).unwrap();
        assert!((ds.records[0].alpha - 10.0 / (2.0 * PI).cosh()).abs() < 1e-15);
        let mismatched = "# normalization=hecke\nj,n,t\n1,2,0.5\n";
        assert!(parse_spectral_dataset(forms, mismatched, 2).is_err());
    }

    #[test]
    fn unsorted_kappa_rejected() {
        let forms = "j,kappa,epsilon,alpha,H_half\n1,9.5,1,1.5,1.0\n2,9.0,1,1.5,1.0\n";
        let hecke = "j,n,t\n1,2,0.5\n2,2,0.5\n";
        assert!(matches!(
            parse_spectral_dataset(forms, hecke, 2),
            Err(SpectralError::Invariant { invariant: "kappa strictly increasing", .. })
        ));
    }

    #[test]
    fn missing_prime_is_an_error() {
        let forms = "j,kappa,epsilon,alpha,H_half\n1,9.5,1,1.5,1.0\n";
        assert!(matches!(
            parse_spectral_dataset(forms, "j,n,t\n1,2,0.5\n", 3),
            Err(SpectralError::Invariant { invariant: "Hecke data coverage", .. })
        ));
    }
}
