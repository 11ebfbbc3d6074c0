//! Recursive spectrum specifications, as accepted by `--spec`:
//!
//! ```text
//! {"interval": {"a": "pi/24", "bc": "dirichlet"}}
//! {"box": {"sides": [10, 10], "bc": "neumann"}}
//! {"sphere2": {}}
//! {"triangle": {}}
//! {"tabulated": {"entries": [[0, 1], [2, 3]], "dimension": 2, "volume": 12.566, "bc": "closed"}}
//! {"tabulated": {"path": "spec.csv", ...}}
//! {"product": [A, B]}
//! ```
//!
//! Lengths are strings (`"pi/24"`, `"1/4pi"`, `"2.5"`) or JSON numbers.

use std::path::PathBuf;

use serde::Deserialize;
use serde_json::Value;

use crate::constants::c_d;
use crate::error::{Error, Result};
use crate::exact::Length;
use crate::spectra::{
    box_spectrum, build_with_count, interval_spectrum, io::read_csv, product_spectrum,
    sphere2_spectrum, tabulated_spectrum, triangle_neumann_spectrum, BoundaryCondition, DomainMeta,
    EigenvalueStream,
};

#[derive(Clone, Debug)]
pub enum SpectrumSpec {
    Interval {
        a: Length,
        bc: BoundaryCondition,
    },
    Box {
        sides: Vec<Length>,
        bc: BoundaryCondition,
    },
    Sphere2,
    Triangle,
    Tabulated(Tabulated),
    Product(Box<SpectrumSpec>, Box<SpectrumSpec>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tabulated {
    #[serde(default)]
    pub entries: Option<Vec<(f64, u64)>>,
    #[serde(default)]
    pub path: Option<PathBuf>,
    pub dimension: u32,
    pub volume: f64,
    pub bc: BoundaryCondition,
    #[serde(default)]
    pub surface_area: Option<f64>,
    /// Values are complete below this; defaults to just above the last entry.
    #[serde(default)]
    pub cutoff: Option<f64>,
}

fn length(v: &Value) -> Result<Length> {
    match v {
        Value::String(s) => s.parse(),
        Value::Number(n) => {
            let x = n
                .as_f64()
                .ok_or_else(|| Error::Config(format!("bad length {n}")))?;
            // Integers and decimals written as JSON numbers parse exactly through the
            // string form.
            n.to_string().parse().or_else(|_| Ok(Length::from(x)))
        }
        _ => Err(Error::Config(format!(
            "length must be a string or number, got {v}"
        ))),
    }
}

fn bc(obj: &Value) -> Result<BoundaryCondition> {
    match obj.get("bc") {
        Some(Value::String(s)) => s.parse(),
        Some(v) => Err(Error::Config(format!("bc must be a string, got {v}"))),
        None => Err(Error::Config("missing \"bc\"".into())),
    }
}

fn only_keys(obj: &Value, allowed: &[&str], what: &str) -> Result<()> {
    let map = obj
        .as_object()
        .ok_or_else(|| Error::Config(format!("{what} takes an object")))?;
    for k in map.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(Error::Config(format!("unknown field {k:?} in {what}")));
        }
    }
    Ok(())
}

impl SpectrumSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("spec is not valid JSON: {e}")))?;
        Self::from_value(&v)
    }

    pub fn from_value(v: &Value) -> Result<Self> {
        let map = v
            .as_object()
            .filter(|m| m.len() == 1)
            .ok_or_else(|| Error::Config(format!("spec must be a single-key object, got {v}")))?;
        let (kind, body) = map.iter().next().unwrap();
        match kind.as_str() {
            "interval" => {
                only_keys(body, &["a", "bc"], "interval")?;
                let a = body
                    .get("a")
                    .ok_or_else(|| Error::Config("interval needs \"a\"".into()))?;
                Ok(Self::Interval {
                    a: length(a)?,
                    bc: bc(body)?,
                })
            }
            "box" => {
                only_keys(body, &["sides", "bc"], "box")?;
                let sides = body
                    .get("sides")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Config("box needs a \"sides\" array".into()))?
                    .iter()
                    .map(length)
                    .collect::<Result<Vec<_>>>()?;
                Ok(Self::Box {
                    sides,
                    bc: bc(body)?,
                })
            }
            "sphere2" => {
                only_keys(body, &[], "sphere2")?;
                Ok(Self::Sphere2)
            }
            "triangle" => {
                only_keys(body, &["bc"], "triangle")?;
                if body.get("bc").is_some() && bc(body)? != BoundaryCondition::Neumann {
                    return Err(Error::Config(
                        "only the Neumann triangle spectrum is available".into(),
                    ));
                }
                Ok(Self::Triangle)
            }
            "tabulated" => {
                let t: Tabulated = serde_json::from_value(body.clone())
                    .map_err(|e| Error::Config(format!("tabulated: {e}")))?;
                if t.entries.is_some() == t.path.is_some() {
                    return Err(Error::Config(
                        "tabulated needs exactly one of \"entries\" and \"path\"".into(),
                    ));
                }
                Ok(Self::Tabulated(t))
            }
            "product" => {
                let parts = body
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| Error::Config("product takes a two-element array".into()))?;
                Ok(Self::Product(
                    Box::new(Self::from_value(&parts[0])?),
                    Box::new(Self::from_value(&parts[1])?),
                ))
            }
            other => Err(Error::Config(format!("unknown spectrum kind {other:?}"))),
        }
    }

    /// Geometry of the specified domain.
    pub fn meta(&self) -> Result<DomainMeta> {
        match self {
            Self::Interval { a, bc } => DomainMeta::interval(a, *bc),
            Self::Box { sides, bc } => DomainMeta::boxed(sides, *bc),
            Self::Sphere2 => Ok(DomainMeta::sphere2()),
            Self::Triangle => Ok(DomainMeta::unit_triangle(BoundaryCondition::Neumann)),
            Self::Tabulated(t) => {
                let m = DomainMeta::new(t.dimension, t.volume, t.bc)?;
                match t.surface_area {
                    Some(a) => m.with_surface_area(a),
                    None => Ok(m),
                }
            }
            Self::Product(a, b) => DomainMeta::product(&a.meta()?, &b.meta()?),
        }
    }

    /// True when the spectrum can be generated for any cutoff.
    pub fn is_generated(&self) -> bool {
        match self {
            Self::Tabulated(_) => false,
            Self::Product(a, b) => a.is_generated() && b.is_generated(),
            _ => true,
        }
    }

    /// Spectrum strictly below `cutoff`. Tabulated spectra cannot be extended past their own
    /// cutoff; asking for more is a range error.
    pub fn build(&self, cutoff: f64) -> Result<EigenvalueStream> {
        match self {
            Self::Interval { a, bc } => interval_spectrum(a.clone(), *bc, cutoff),
            Self::Box { sides, bc } => box_spectrum(sides, *bc, cutoff),
            Self::Sphere2 => sphere2_spectrum(cutoff),
            Self::Triangle => triangle_neumann_spectrum(cutoff),
            Self::Tabulated(t) => {
                let s = self.tabulated_stream(t)?;
                s.truncate(cutoff)
            }
            Self::Product(a, b) => product_spectrum(&a.build(cutoff)?, &b.build(cutoff)?, cutoff),
        }
    }

    /// Largest cutoff at which the spectrum is known; infinite for generated spectra.
    pub fn max_cutoff(&self) -> Result<f64> {
        match self {
            Self::Tabulated(t) => Ok(self.tabulated_stream(t)?.cutoff()),
            Self::Product(a, b) => Ok(a.max_cutoff()?.min(b.max_cutoff()?)),
            _ => Ok(f64::INFINITY),
        }
    }

    /// Spectrum holding at least `need` eigenvalues, grown from a Weyl-law guess. Tabulated
    /// spectra are returned whole and may hold fewer.
    pub fn build_with_count(&self, need: u64) -> Result<EigenvalueStream> {
        if !self.is_generated() {
            return self.build(self.max_cutoff()?);
        }
        let meta = self.meta()?;
        let start = (need.max(1) as f64 / (c_d(meta.dimension) * meta.volume))
            .powf(2.0 / meta.dimension as f64)
            .max(1.0);
        build_with_count(|c| self.build(c), need, start)
    }

    fn tabulated_stream(&self, t: &Tabulated) -> Result<EigenvalueStream> {
        let entries = match (&t.entries, &t.path) {
            (Some(e), _) => e.clone(),
            (None, Some(p)) => read_csv(std::fs::File::open(p)?)?,
            (None, None) => unreachable!("checked at parse time"),
        };
        let cutoff = match t.cutoff {
            Some(c) => c,
            None => entries
                .last()
                .map(|e| e.0 * (1.0 + 1e-12) + 1e-12)
                .unwrap_or(1.0),
        };
        tabulated_spectrum(&entries, &self.meta()?, cutoff)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_nested_product() {
        let s = SpectrumSpec::parse(
            r#"{"product":[{"interval":{"a":"pi/24","bc":"dirichlet"}},{"sphere2":{}}]}"#,
        )
        .unwrap();
        let st = s.build(600.0).unwrap();
        assert_eq!(st.levels()[0].value, 576.0);
        assert!(st.is_exact());
        assert_eq!(s.meta().unwrap().dimension, 3);
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            r#"{"interval":{"a":"pi"}}"#,
            r#"{"interval":{"a":"pi","bc":"dirichlet","x":1}}"#,
            r#"{"product":[{"sphere2":{}}]}"#,
            r#"{"blob":{}}"#,
            r#"{"triangle":{"bc":"dirichlet"}}"#,
            r#"{"tabulated":{"dimension":2,"volume":1,"bc":"neumann"}}"#,
            "not json",
        ] {
            assert!(
                matches!(SpectrumSpec::parse(bad), Err(Error::Config(_))),
                "{bad}"
            );
        }
    }

    #[test]
    fn numeric_lengths_are_exact_when_decimal() {
        let s = SpectrumSpec::parse(r#"{"box":{"sides":[10, 2.5],"bc":"neumann"}}"#).unwrap();
        assert!(s.build(10.0).unwrap().is_exact());
    }
}
