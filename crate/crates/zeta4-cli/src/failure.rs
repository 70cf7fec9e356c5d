//! Exit-code classification and the machine-readable diagnostic stream.

use std::fmt::Display;

use zeta4::lambda::LambdaError;
use zeta4::moments::MomentError;
use zeta4::spectral::SpectralError;
use zeta4::zeta::ZetaError;

/// An error together with the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;

pub type CmdResult<T> = Result<T, Failure>;

/// Tags a fallible result as a configuration/input problem or a numeric one.
pub trait Classify<T> {
    fn config(self) -> CmdResult<T>;
    fn numeric(self) -> CmdResult<T>;
}

impl<T, E: Into<anyhow::Error>> Classify<T> for Result<T, E> {
    fn config(self) -> CmdResult<T> {
        self.map_err(|e| Failure { code: EXIT_CONFIG, error: e.into() })
    }

    fn numeric(self) -> CmdResult<T> {
        self.map_err(|e| Failure { code: EXIT_NUMERIC, error: e.into() })
    }
}

pub fn config_failure(msg: impl Display) -> Failure {
    Failure { code: EXIT_CONFIG, error: anyhow::anyhow!("{msg}") }
}

fn moment_code(e: &MomentError) -> u8 {
    match e {
        MomentError::Precondition(_)
        | MomentError::NearThreeQuarters(_)
        | MomentError::Table(_)
        | MomentError::Zeta(ZetaError::Config(_) | ZetaError::OutOfWindow(_)) => EXIT_CONFIG,
        _ => EXIT_NUMERIC,
    }
}

impl From<MomentError> for Failure {
    fn from(e: MomentError) -> Self {
        Self { code: moment_code(&e), error: e.into() }
    }
}

impl From<SpectralError> for Failure {
    fn from(e: SpectralError) -> Self {
        let code = match &e {
            SpectralError::Parse { .. }
            | SpectralError::Invariant { .. }
            | SpectralError::Io { .. }
            | SpectralError::InsufficientData(_)
            | SpectralError::Precondition(_) => EXIT_CONFIG,
            SpectralError::Moment(m) => moment_code(m),
            _ => EXIT_NUMERIC,
        };
        Self { code, error: e.into() }
    }
}

impl From<LambdaError> for Failure {
    fn from(e: LambdaError) -> Self {
        let code = if matches!(e, LambdaError::Precondition(_)) { EXIT_CONFIG } else { EXIT_NUMERIC };
        Self { code, error: e.into() }
    }
}

fn quote(value: &str) -> String {
    if value.chars().any(|c| c.is_whitespace() || c == '"' || c == '=') {
        format!("\"{}\"", value.replace('\\', "\\\\").replace('"', "\\\""))
    } else {
        value.to_string()
    }
}

/// Writes one `key=value ...` line to stderr.
pub fn diagnostic(level: &str, pairs: &[(&str, String)]) {
    let mut line = format!("level={level}");
    for (k, v) in pairs {
        line.push(' ');
        line.push_str(k);
        line.push('=');
        line.push_str(&quote(v));
    }
    eprintln!("{line}");
}

pub fn warn(event: &str, pairs: &[(&str, String)]) {
    let mut all = vec![("event", event.to_string())];
    all.extend_from_slice(pairs);
    diagnostic("warn", &all);
}

pub fn info(event: &str, pairs: &[(&str, String)]) {
    let mut all = vec![("event", event.to_string())];
    all.extend_from_slice(pairs);
    diagnostic("info", &all);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quoting() {
        assert_eq!(quote("abc"), "abc");
        assert_eq!(quote("a b"), "\"a b\"");
        assert_eq!(quote("x=\"y\""), "\"x=\\\"y\\\"\"");
    }

    #[test]
    fn classification() {
        let r: Result<(), std::io::Error> = Err(std::io::Error::other("boom"));
        assert_eq!(r.config().unwrap_err().code, EXIT_CONFIG);
        let r: Result<(), std::io::Error> = Err(std::io::Error::other("boom"));
        assert_eq!(r.numeric().unwrap_err().code, EXIT_NUMERIC);
    }
}
