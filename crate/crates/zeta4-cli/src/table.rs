//! Small CSV helpers shared by the commands.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context};

use crate::failure::{Classify, CmdResult};
use zeta4::moments::SecondaryCoefficients;

pub const COEFF_HEADER: [&str; 10] =
    ["sigma", "a0", "a1", "a2", "se0", "se1", "se2", "fit_from", "fit_to", "fit_residual"];

pub fn create(path: &Path) -> CmdResult<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display())).config()?;
    }
    let f = File::create(path).with_context(|| format!("creating {}", path.display())).config()?;
    Ok(BufWriter::new(f))
}

pub fn write_text(path: &Path, text: &str) -> CmdResult<()> {
    let mut w = create(path)?;
    w.write_all(text.as_bytes()).and_then(|_| w.flush()).with_context(|| format!("writing {}", path.display())).config()
}

/// Formats a finite float; anything else is a numeric failure.
pub fn num(x: f64, what: &str) -> CmdResult<String> {
    if x.is_finite() {
        Ok(x.to_string())
    } else {
        Err(anyhow::anyhow!("non-finite {what}: {x}")).numeric()
    }
}

/// Writes a header and rows of preformatted cells.
pub fn write_rows(path: &Path, header: &[&str], rows: &[Vec<String>]) -> CmdResult<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(create(path)?);
    w.write_record(header).config()?;
    for row in rows {
        w.write_record(row).config()?;
    }
    w.flush().config()?;
    Ok(())
}

pub fn write_coefficients(path: &Path, c: &SecondaryCoefficients) -> CmdResult<()> {
    let cells = [
        c.sigma,
        c.a[0],
        c.a[1],
        c.a[2],
        c.std_errors[0],
        c.std_errors[1],
        c.std_errors[2],
        c.fit_window.0,
        c.fit_window.1,
        c.fit_residual,
    ];
    let row = cells.iter().map(|&x| num(x, "coefficient")).collect::<CmdResult<Vec<_>>>()?;
    write_rows(path, &COEFF_HEADER, &[row])
}

pub fn read_coefficients(path: &Path) -> anyhow::Result<SecondaryCoefficients> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != COEFF_HEADER {
        bail!("{}: expected header {}", path.display(), COEFF_HEADER.join(","));
    }
    let rec = r.records().next().with_context(|| format!("{}: no coefficient row", path.display()))??;
    let v: Vec<f64> = rec
        .iter()
        .map(|c| c.trim().parse::<f64>().with_context(|| format!("{}: bad number '{c}'", path.display())))
        .collect::<anyhow::Result<_>>()?;
    Ok(SecondaryCoefficients {
        sigma: v[0],
        a: [v[1], v[2], v[3]],
        std_errors: [v[4], v[5], v[6]],
        fit_window: (v[7], v[8]),
        fit_residual: v[9],
    })
}

/// A headed numeric table; empty cells read as `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl NumericTable {
    pub fn column(&self, name: &str) -> anyhow::Result<usize> {
        self.header
            .iter()
            .position(|h| h == name)
            .with_context(|| format!("no column '{name}' (have {})", self.header.join(",")))
    }

    /// Rows where both columns are present.
    pub fn pairs(&self, x: &str, y: &str) -> anyhow::Result<Vec<(f64, f64)>> {
        let (ix, iy) = (self.column(x)?, self.column(y)?);
        Ok(self.rows.iter().filter_map(|r| Some((r[ix]?, r[iy]?))).collect())
    }
}

/// Reads a CSV whose every non-empty cell is a number.  Text cells are
/// accepted only in columns listed in `text_columns` and read as `None`.
pub fn read_numeric_table(path: &Path, text_columns: &[&str]) -> anyhow::Result<NumericTable> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.with_context(|| format!("{}: row {}", path.display(), i + 2))?;
        let mut row = Vec::with_capacity(rec.len());
        for (j, cell) in rec.iter().enumerate() {
            let cell = cell.trim();
            if cell.is_empty() {
                row.push(None);
            } else {
                match cell.parse::<f64>() {
                    Ok(x) => row.push(Some(x)),
                    Err(_) if text_columns.contains(&header[j].as_str()) => row.push(None),
                    Err(_) => bail!("{}: row {}, column '{}': '{cell}' is not a number", path.display(), i + 2, header[j]),
                }
            }
        }
        rows.push(row);
    }
    Ok(NumericTable { header, rows })
}
