//! CSV and JSON forms of a spectrum.
//!
//! CSV: header `value,multiplicity`, rows in increasing value order.
//! JSON: `{"cutoff": L, "exact": bool, "entries": [[v, m], ...]}`.
//! Floats are written in shortest round-trip form, so re-reading is lossless.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::EigenvalueStream;
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
pub struct SpectrumJson {
    pub cutoff: f64,
    pub exact: bool,
    pub entries: Vec<(f64, u64)>,
}

impl From<&EigenvalueStream> for SpectrumJson {
    fn from(s: &EigenvalueStream) -> Self {
        Self {
            cutoff: s.cutoff(),
            exact: s.is_exact(),
            entries: s
                .levels()
                .iter()
                .map(|l| (l.value, l.multiplicity))
                .collect(),
        }
    }
}

pub fn write_csv<W: Write>(s: &EigenvalueStream, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["value", "multiplicity"])?;
    for l in s.levels() {
        w.write_record([l.value.to_string(), l.multiplicity.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<(f64, u64)>> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["value", "multiplicity"] {
        return Err(Error::Validation(format!(
            "expected header value,multiplicity, got {}",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut out = Vec::new();
    for rec in r.deserialize() {
        let (v, m): (f64, u64) = rec?;
        out.push((v, m));
    }
    Ok(out)
}

pub fn to_json(s: &EigenvalueStream) -> Result<String> {
    Ok(serde_json::to_string(&SpectrumJson::from(s))?)
}

pub fn from_json(text: &str) -> Result<SpectrumJson> {
    Ok(serde_json::from_str(text)?)
}
