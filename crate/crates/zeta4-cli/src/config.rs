//! Run configuration: flat `key = value` files merged with command-line flags.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};

/// How the smoothing width is chosen at each height.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WidthRule {
    Fixed(f64),
    /// `G = T^θ`.
    Exponent(f64),
}

impl WidthRule {
    pub fn at(self, t: f64) -> f64 {
        match self {
            Self::Fixed(g) => g,
            Self::Exponent(theta) => t.powf(theta),
        }
    }
}

/// Every setting a command may read.  Keys of the config file are the long
/// flag names (`sigma`, `t-from`, ...).
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: String,
    pub sigma: f64,
    pub t_from: f64,
    pub t_to: f64,
    pub t_step: f64,
    pub width: Option<WidthRule>,
    pub dataset: Option<PathBuf>,
    pub out: PathBuf,
    pub tol: f64,
    pub seed: u64,
    pub input: Option<PathBuf>,
    pub coeffs: Option<PathBuf>,
    pub r_values: Vec<f64>,
    pub k_values: Vec<f64>,
    pub fit_from: Option<f64>,
    pub fit_to: Option<f64>,
    pub fit_step: Option<f64>,
    pub kind: Option<String>,
    pub x_column: Option<String>,
    pub y_column: Option<String>,
    pub literal_saddle: bool,
    pub smoothed_error: bool,
}

pub const KEYS: [&str; 21] = [
    "sigma", "t-from", "t-to", "t-step", "g", "g-exp", "dataset", "out", "tol", "seed", "input", "coeffs", "r", "k",
    "fit-from", "fit-to", "fit-step", "kind", "x", "y", "saddle-form",
];
const FLAG_KEYS: [&str; 1] = ["smoothed-error"];

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<f64>().with_context(|| format!("{key}: '{s}' is not a number")))
        .collect()
}

fn number(values: &BTreeMap<String, String>, key: &str) -> Result<Option<f64>> {
    values
        .get(key)
        .map(|v| v.parse::<f64>().with_context(|| format!("{key}: '{v}' is not a number")))
        .transpose()
}

/// Reads `key = value` lines; `#` starts a comment.
pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    parse_config_text(&text)
}

pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| anyhow!("config line {}: expected key = value", i + 1))?;
        let key = key.trim();
        if !KEYS.contains(&key) && !FLAG_KEYS.contains(&key) && key != "command" {
            bail!("config line {}: unknown key '{key}'", i + 1);
        }
        out.insert(key.to_string(), value.trim().to_string());
    }
    Ok(out)
}

impl RunConfig {
    /// Builds the configuration from merged `key → value` settings.
    pub fn from_values(command: &str, values: &BTreeMap<String, String>) -> Result<Self> {
        let width = match (number(values, "g")?, number(values, "g-exp")?) {
            (Some(_), Some(_)) => bail!("give either g or g-exp, not both"),
            (Some(g), None) => {
                if !(g > 0.0) {
                    bail!("g must be positive, got {g}");
                }
                Some(WidthRule::Fixed(g))
            }
            (None, Some(theta)) => {
                if !(1.0 / 3.0 - 1e-12..=0.99).contains(&theta) {
                    bail!("g-exp must lie in [1/3, 0.99], got {theta}");
                }
                Some(WidthRule::Exponent(theta))
            }
            (None, None) => None,
        };
        let literal_saddle = match values.get("saddle-form").map(String::as_str) {
            None | Some("derived") => false,
            Some("literal") => true,
            Some(other) => bail!("saddle-form must be 'derived' or 'literal', got '{other}'"),
        };
        let cfg = Self {
            command: command.to_string(),
            sigma: number(values, "sigma")?.unwrap_or(0.6),
            t_from: number(values, "t-from")?.unwrap_or(0.0),
            t_to: number(values, "t-to")?.unwrap_or(0.0),
            t_step: number(values, "t-step")?.unwrap_or(1.0),
            width,
            dataset: values.get("dataset").map(PathBuf::from),
            out: values.get("out").map(PathBuf::from).ok_or_else(|| anyhow!("an output path (--out) is required"))?,
            tol: number(values, "tol")?.unwrap_or(1e-10),
            seed: values
                .get("seed")
                .map(|v| v.parse::<u64>().with_context(|| format!("seed: '{v}' is not an integer")))
                .transpose()?
                .unwrap_or(0),
            input: values.get("input").map(PathBuf::from),
            coeffs: values.get("coeffs").map(PathBuf::from),
            r_values: values.get("r").map(|v| parse_list("r", v)).transpose()?.unwrap_or_default(),
            k_values: values.get("k").map(|v| parse_list("k", v)).transpose()?.unwrap_or_default(),
            fit_from: number(values, "fit-from")?,
            fit_to: number(values, "fit-to")?,
            fit_step: number(values, "fit-step")?,
            kind: values.get("kind").cloned(),
            x_column: values.get("x").cloned(),
            y_column: values.get("y").cloned(),
            literal_saddle,
            smoothed_error: values.get("smoothed-error").is_some_and(|v| v == "true"),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if !(self.t_from <= self.t_to) {
            bail!("t-from ({}) must not exceed t-to ({})", self.t_from, self.t_to);
        }
        if !(self.t_step > 0.0) {
            bail!("t-step must be positive, got {}", self.t_step);
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            bail!("tol must lie in (0, 1), got {}", self.tol);
        }
        if self.t_from < 0.0 {
            bail!("t-from must be non-negative, got {}", self.t_from);
        }
        Ok(())
    }

    /// Heights `t-from + k·t-step` for `k >= 1` up to `t-to`; empty when
    /// `t-from = t-to`.
    pub fn grid(&self) -> Vec<f64> {
        let n = ((self.t_to - self.t_from) / self.t_step + 1e-9).floor() as usize;
        (1..=n).map(|k| self.t_from + k as f64 * self.t_step).collect()
    }

    /// Path next to the main output: `dir/stem.<suffix>`.
    pub fn companion(&self, suffix: &str) -> PathBuf {
        let stem = self.out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into());
        self.out.with_file_name(format!("{stem}.{suffix}"))
    }

    /// The resolved configuration in the same `key = value` format it is read from.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let opt = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
        let list = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
        let _ = writeln!(s, "command = {}", self.command);
        let _ = writeln!(s, "sigma = {}", self.sigma);
        let _ = writeln!(s, "t-from = {}", self.t_from);
        let _ = writeln!(s, "t-to = {}", self.t_to);
        let _ = writeln!(s, "t-step = {}", self.t_step);
        match self.width {
            Some(WidthRule::Fixed(g)) => {
                let _ = writeln!(s, "g = {g}");
            }
            Some(WidthRule::Exponent(theta)) => {
                let _ = writeln!(s, "g-exp = {theta}");
            }
            None => {}
        }
        let mut put = |key: &str, value: Option<String>| {
            if let Some(v) = value {
                let _ = writeln!(s, "{key} = {v}");
            }
        };
        put("dataset", opt(&self.dataset));
        put("out", Some(self.out.display().to_string()));
        put("tol", Some(self.tol.to_string()));
        put("seed", Some(self.seed.to_string()));
        put("input", opt(&self.input));
        put("coeffs", opt(&self.coeffs));
        put("r", (!self.r_values.is_empty()).then(|| list(&self.r_values)));
        put("k", (!self.k_values.is_empty()).then(|| list(&self.k_values)));
        put("fit-from", self.fit_from.map(|v| v.to_string()));
        put("fit-to", self.fit_to.map(|v| v.to_string()));
        put("fit-step", self.fit_step.map(|v| v.to_string()));
        put("kind", self.kind.clone());
        put("x", self.x_column.clone());
        put("y", self.y_column.clone());
        put("saddle-form", Some(if self.literal_saddle { "literal" } else { "derived" }.into()));
        put("smoothed-error", Some(self.smoothed_error.to_string()));
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn values(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn grid_is_half_open() {
        let cfg = RunConfig::from_values("moment", &values(&[("out", "x.csv"), ("t-from", "0"), ("t-to", "3")])).unwrap();
        assert_eq!(cfg.grid(), vec![1.0, 2.0, 3.0]);
        let empty = RunConfig::from_values("moment", &values(&[("out", "x.csv"), ("t-from", "5"), ("t-to", "5")])).unwrap();
        assert!(empty.grid().is_empty());
    }

    #[test]
    fn rejects_bad_settings() {
        let base = [("out", "x.csv")];
        for extra in [("t-step", "0"), ("tol", "-1"), ("g-exp", "0.2"), ("t-from", "9")] {
            let mut v = values(&base);
            v.insert(extra.0.into(), extra.1.into());
            v.entry("t-to".into()).or_insert("1".into());
            assert!(RunConfig::from_values("moment", &v).is_err(), "{extra:?}");
        }
        let both = values(&[("out", "x"), ("g", "10"), ("g-exp", "0.5")]);
        assert!(RunConfig::from_values("moment", &both).is_err());
        assert!(RunConfig::from_values("moment", &values(&[])).is_err());
    }

    #[test]
    fn config_text_round_trip() {
        let text = "# run\nsigma = 0.7\nt-to = 10 # comment\ng-exp = 0.5\nout = a/b.csv\nr = 1,2,3\n";
        let cfg = RunConfig::from_values("moment", &parse_config_text(text).unwrap()).unwrap();
        assert_eq!(cfg.width, Some(WidthRule::Exponent(0.5)));
        assert_eq!(cfg.r_values, vec![1.0, 2.0, 3.0]);
        let again = RunConfig::from_values("moment", &parse_config_text(&cfg.render()).unwrap()).unwrap();
        assert_eq!(again, cfg);
        assert!(parse_config_text("bogus = 1").is_err());
        assert!(parse_config_text("no equals sign").is_err());
    }

    #[test]
    fn companion_paths() {
        let cfg = RunConfig::from_values("moment", &values(&[("out", "dir/table.csv")])).unwrap();
        assert_eq!(cfg.companion("config"), PathBuf::from("dir/table.config"));
    }
}
