//! `zeta4`: batch driver for fourth-moment tables, kernel comparisons,
//! spectral sums and plots.

mod config;
mod failure;
mod lambda_cmd;
mod moment_cmd;
mod plot;
mod spectral_cmd;
mod table;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{read_config_file, RunConfig};
use failure::{diagnostic, Classify, CmdResult};

#[derive(Parser)]
#[command(name = "zeta4", version, about = "Fourth moment of the zeta function off the critical line")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sharp fourth moment, main term and E₂ over a T-grid.
    Moment(Common),
    /// E₂ series with fitted secondary coefficients and a growth summary.
    ErrorTerm(Common),
    /// Direct vs saddle-point kernel over a list of r (T = --t-to, τ = --sigma).
    LambdaCompare(Common),
    /// Spectral sum S(T, σ; G), Theorem-2 ratio table and nonvanishing report.
    Spectral(Common),
    /// Static SVG plot of a table.
    Plot(Common),
    /// Fit the secondary main-term coefficients only.
    Fit(Common),
}

impl Command {
    fn parts(&self) -> (&'static str, &Common) {
        match self {
            Self::Moment(c) => ("moment", c),
            Self::ErrorTerm(c) => ("error-term", c),
            Self::LambdaCompare(c) => ("lambda-compare", c),
            Self::Spectral(c) => ("spectral", c),
            Self::Plot(c) => ("plot", c),
            Self::Fit(c) => ("fit", c),
        }
    }
}

#[derive(Args, Debug, Clone, Default)]
struct Common {
    /// Flat `key = value` file; flags given on the command line win.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<String>,
    #[arg(long = "t-from")]
    t_from: Option<String>,
    #[arg(long = "t-to")]
    t_to: Option<String>,
    #[arg(long = "t-step")]
    t_step: Option<String>,
    /// Fixed smoothing width G.
    #[arg(long, conflicts_with = "g_exp")]
    g: Option<String>,
    /// Width exponent θ with G = T^θ, θ ∈ [1/3, 0.99].
    #[arg(long = "g-exp")]
    g_exp: Option<String>,
    #[arg(long)]
    tol: Option<String>,
    /// Directory holding forms.csv and hecke.csv.
    #[arg(long)]
    dataset: Option<String>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Input table (moment table for error-term/fit, E₂ table for spectral, any table for plot).
    #[arg(long)]
    input: Option<String>,
    /// Coefficient file written by `fit` or `error-term`.
    #[arg(long)]
    coeffs: Option<String>,
    /// Comma-separated r values for lambda-compare.
    #[arg(long)]
    r: Option<String>,
    /// Comma-separated K values for the Theorem-2 table.
    #[arg(long)]
    k: Option<String>,
    #[arg(long = "fit-from")]
    fit_from: Option<String>,
    #[arg(long = "fit-to")]
    fit_to: Option<String>,
    /// Grid step of the fit window when it is computed in-run.
    #[arg(long = "fit-step")]
    fit_step: Option<String>,
    /// Plot kind: series, loglog or scatter.
    #[arg(long)]
    kind: Option<String>,
    /// Column for the horizontal axis of a plot.
    #[arg(long)]
    x: Option<String>,
    /// Column for the vertical axis of a plot.
    #[arg(long)]
    y: Option<String>,
    /// Saddle point used by the spectral sum: derived or literal.
    #[arg(long = "saddle-form")]
    saddle_form: Option<String>,
    /// Correlate S against the detrended G-smoothed error computed in-run.
    #[arg(long = "smoothed-error")]
    smoothed_error: bool,
}

impl Common {
    fn overrides(&self) -> BTreeMap<String, String> {
        let pairs = [
            ("sigma", &self.sigma),
            ("t-from", &self.t_from),
            ("t-to", &self.t_to),
            ("t-step", &self.t_step),
            ("g", &self.g),
            ("g-exp", &self.g_exp),
            ("tol", &self.tol),
            ("dataset", &self.dataset),
            ("out", &self.out),
            ("seed", &self.seed),
            ("input", &self.input),
            ("coeffs", &self.coeffs),
            ("r", &self.r),
            ("k", &self.k),
            ("fit-from", &self.fit_from),
            ("fit-to", &self.fit_to),
            ("fit-step", &self.fit_step),
            ("kind", &self.kind),
            ("x", &self.x),
            ("y", &self.y),
            ("saddle-form", &self.saddle_form),
        ];
        let mut map: BTreeMap<String, String> =
            pairs.into_iter().filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone()))).collect();
        if self.smoothed_error {
            map.insert("smoothed-error".into(), "true".into());
        }
        map
    }
}

fn resolve(command: &str, common: &Common) -> CmdResult<RunConfig> {
    let mut values = match &common.config {
        Some(path) => read_config_file(path).config()?,
        None => BTreeMap::new(),
    };
    if let Some(file_command) = values.remove("command") {
        if file_command != command {
            return Err(failure::config_failure(format!(
                "config file is for '{file_command}' but '{command}' was invoked"
            )));
        }
    }
    // `g` and `g-exp` are alternatives: a flag for one replaces a file entry for the other.
    let flags = common.overrides();
    if flags.contains_key("g") {
        values.remove("g-exp");
    }
    if flags.contains_key("g-exp") {
        values.remove("g");
    }
    values.extend(flags);
    RunConfig::from_values(command, &values).config()
}

fn run(cli: &Cli) -> CmdResult<()> {
    let (name, common) = cli.command.parts();
    let cfg = resolve(name, common)?;
    table::write_text(&cfg.companion("config"), &cfg.render())?;
    match &cli.command {
        Command::Moment(_) => moment_cmd::moment(&cfg),
        Command::ErrorTerm(_) => moment_cmd::error_term(&cfg),
        Command::Fit(_) => moment_cmd::fit(&cfg),
        Command::LambdaCompare(_) => lambda_cmd::lambda_compare(&cfg),
        Command::Spectral(_) => spectral_cmd::spectral(&cfg),
        Command::Plot(_) => plot::plot(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            diagnostic(
                "error",
                &[
                    ("command", cli.command.parts().0.to_string()),
                    ("code", f.code.to_string()),
                    ("message", format!("{:#}", f.error)),
                ],
            );
            ExitCode::from(f.code)
        }
    }
}
