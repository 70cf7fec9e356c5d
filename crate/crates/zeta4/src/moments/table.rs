use std::io::{Read, Write};

use super::{MomentError, MomentSample};

pub const SAMPLE_HEADER: [&str; 7] = ["T", "sigma", "G", "sharp_moment", "main_term", "E2", "spectral_prediction"];

fn table_err(e: impl std::fmt::Display) -> MomentError {
    MomentError::Table(e.to_string())
}

fn optional(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// Writes samples as CSV with [`SAMPLE_HEADER`]; absent optional values are empty cells.
pub fn write_samples<W: Write>(out: W, samples: &[MomentSample]) -> Result<(), MomentError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SAMPLE_HEADER).map_err(table_err)?;
    for s in samples {
        w.write_record([
            s.t.to_string(),
            s.sigma.to_string(),
            optional(s.g),
            s.sharp_moment.to_string(),
            s.main_term.to_string(),
            s.e2.to_string(),
            optional(s.spectral_prediction),
        ])
        .map_err(table_err)?;
    }
    w.flush().map_err(table_err)
}

/// Reads a table written by [`write_samples`]; the header must match exactly.
pub fn read_samples<R: Read>(input: R) -> Result<Vec<MomentSample>, MomentError> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers().map_err(table_err)?.clone();
    if header.iter().ne(SAMPLE_HEADER) {
        return Err(MomentError::Table(format!("unexpected header {:?}", header.iter().collect::<Vec<_>>())));
    }
    let mut rows = Vec::new();
    for (line, record) in r.records().enumerate() {
        let record = record.map_err(table_err)?;
        let field = |i: usize| -> Result<Option<f64>, MomentError> {
            let cell = record[i].trim();
            if cell.is_empty() {
                return Ok(None);
            }
            cell.parse::<f64>()
                .map(Some)
                .map_err(|e| MomentError::Table(format!("row {}, column {}: {e}", line + 1, SAMPLE_HEADER[i])))
        };
        let required = |i: usize| {
            field(i)?.ok_or_else(|| MomentError::Table(format!("row {}: {} is empty", line + 1, SAMPLE_HEADER[i])))
        };
        rows.push(MomentSample {
            t: required(0)?,
            sigma: required(1)?,
            g: field(2)?,
            sharp_moment: required(3)?,
            main_term: required(4)?,
            e2: required(5)?,
            spectral_prediction: field(6)?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn header_line() {
        let mut buf = Vec::new();
        write_samples(&mut buf, &[]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "T,sigma,G,sharp_moment,main_term,E2,spectral_prediction\n");
    }

    #[test]
    fn empty_optional_cells() {
        let mut buf = Vec::new();
        write_samples(&mut buf, &[MomentSample::new(100.0, 0.6, 12.5, 12.0)]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().nth(1), Some("100,0.6,,12.5,12,0.5,"));
    }

    #[test]
    fn rejects_bad_header_and_cells() {
        assert!(read_samples("T,sigma\n1,2\n".as_bytes()).is_err());
        let bad = "T,sigma,G,sharp_moment,main_term,E2,spectral_prediction\n1,0.6,,x,1,1,\n";
        assert!(matches!(read_samples(bad.as_bytes()), Err(MomentError::Table(_))));
    }

    proptest! {
        #[test]
        fn round_trip_is_exact(
            t in 1.0f64..1e4, sigma in 0.5f64..1.0, g in proptest::option::of(1.0f64..1e3),
            sharp in -1e6f64..1e6, main in -1e6f64..1e6, s in proptest::option::of(-1e3f64..1e3),
        ) {
            let mut sample = MomentSample::new(t, sigma, sharp, main);
            sample.g = g;
            sample.spectral_prediction = s;
            let mut buf = Vec::new();
            write_samples(&mut buf, &[sample]).unwrap();
            let back = read_samples(buf.as_slice()).unwrap();
            prop_assert_eq!(back, vec![sample]);
        }
    }
}
