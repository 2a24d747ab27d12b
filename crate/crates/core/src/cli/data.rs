use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::inference::Sample;
use crate::model::ObservationPair;
use crate::study::output::num;

fn io_error(e: impl std::fmt::Display) -> Error {
    Error::Io(e.to_string())
}

/// Writes pairs as CSV with header `s,r`.
pub fn write_pairs<W: Write>(out: W, pairs: &[ObservationPair]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["s", "r"]).map_err(io_error)?;
    for p in pairs {
        w.write_record([num(p.s), num(p.r)]).map_err(io_error)?;
    }
    w.flush().map_err(io_error)
}

/// Reads an `s,r` CSV. Bad rows are reported with their 1-based line number.
pub fn read_pairs<R: Read>(input: R) -> Result<Sample> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = rdr.headers().map_err(|e| Error::MalformedInput { line: 1, message: e.to_string() })?;
    if headers.len() != 2 || &headers[0] != "s" || &headers[1] != "r" {
        return Err(Error::MalformedInput {
            line: 1,
            message: format!("expected header `s,r`, found `{}`", headers.iter().collect::<Vec<_>>().join(",")),
        });
    }
    let mut pairs = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| Error::MalformedInput {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: usize, name: &str| -> Result<f64> {
            let text = &record[i];
            let v: f64 = text.parse().map_err(|_| Error::MalformedInput {
                line,
                message: format!("{name} value `{text}` is not a number"),
            })?;
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::MalformedInput {
                    line,
                    message: format!("{name} value {v} must be positive and finite"),
                });
            }
            Ok(v)
        };
        pairs.push(ObservationPair { s: field(0, "s")?, r: field(1, "r")? });
    }
    if pairs.is_empty() {
        return Err(Error::MalformedInput { line: 1, message: "no data rows".into() });
    }
    Sample::new(pairs)
}
