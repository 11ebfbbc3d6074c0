//! Thin-product thresholds `a_0`: the largest scaling of the first factor for which the
//! product is shown to satisfy Polya's inequality, given remainder constants of the second
//! factor. Each is a minimum of several branches; the result reports every branch.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{a_d_const, b_d_const, c_d, h1, h2};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdCase {
    /// `(0,a) x Omega`, `Omega` planar, Dirichlet.
    DirichletThinD2,
    /// `(0,a) x Omega`, `Omega` planar, Neumann.
    NeumannThinD2,
    /// `(0,a) x Omega`, `dim Omega >= 3`, Dirichlet.
    DirichletThinD3Plus,
    /// `(0,a) x Omega`, `dim Omega >= 3`, Neumann.
    NeumannThinD3Plus,
    /// `(0,a) x M`, `M` a closed surface, Dirichlet.
    ManifoldDirichletD2,
    /// `(0,a) x M`, `M` closed with `dim M >= 3`, Dirichlet.
    ManifoldDirichletD3Plus,
}

impl std::str::FromStr for ThresholdCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| Error::Config(format!("unknown threshold case {s:?}")))
    }
}

/// Inputs of a threshold formula. Which fields are required depends on the case.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdRequest {
    pub case: ThresholdCase,
    /// `|Omega|` or `|M|`.
    pub volume: Option<f64>,
    /// Two-term remainder constant: `C(Omega)` for domains, `C_1(M)` for manifolds.
    pub remainder: Option<f64>,
    /// Onset `C_1(Omega)` of the Neumann estimates.
    pub onset: Option<f64>,
    /// Dimension of the second factor; fixed to 2 by the planar and surface cases.
    pub dimension: Option<u32>,
}

impl ThresholdRequest {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("threshold request: {e}")))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Branch {
    pub formula: String,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThresholdResult {
    pub case: ThresholdCase,
    pub value: f64,
    pub binding: String,
    pub branches: Vec<Branch>,
    /// Names of the user-supplied constants the value is conditional on.
    pub conditional_on: Vec<String>,
}

fn need(v: Option<f64>, name: &str, case: ThresholdCase) -> Result<f64> {
    match v {
        Some(x) if x > 0.0 && x.is_finite() => Ok(x),
        Some(x) => Err(Error::Config(format!("{name} must be positive, got {x}"))),
        None => Err(Error::Config(format!("{case:?} needs {name}"))),
    }
}

fn dimension(req: &ThresholdRequest, fixed: Option<u32>) -> Result<u32> {
    match (fixed, req.dimension) {
        (Some(f), Some(d)) if d != f => Err(Error::Config(format!(
            "{:?} is for dimension {f}, got {d}",
            req.case
        ))),
        (Some(f), _) => Ok(f),
        (None, Some(d)) if d >= 3 => Ok(d),
        (None, Some(d)) => Err(Error::Case(format!("{:?} needs d >= 3, got {d}", req.case))),
        (None, None) => Err(Error::Config(format!("{:?} needs dimension", req.case))),
    }
}

fn b(formula: &str, value: f64) -> Branch {
    Branch {
        formula: formula.to_string(),
        value,
    }
}

/// Evaluate the threshold formula for `req`.
pub fn threshold_a0(req: &ThresholdRequest) -> Result<ThresholdResult> {
    use ThresholdCase::*;
    let case = req.case;
    let vol = need(req.volume, "volume", case)?;
    let c = need(req.remainder, "remainder", case)?;
    let mut conditional = vec!["remainder".to_string()];
    let branches = match case {
        DirichletThinD2 => {
            dimension(req, Some(2))?;
            vec![b("|Omega|/(8 pi C)", vol / (8.0 * PI * c))]
        }
        NeumannThinD2 => {
            dimension(req, Some(2))?;
            let c1 = need(req.onset, "onset", case)?;
            conditional.push("onset".into());
            vec![
                b("|Omega|/(96 C)", vol / (96.0 * c)),
                b(
                    "(C_3 |Omega|)^-1 C_1^-3/2",
                    1.0 / (c_d(3) * vol * c1.powf(1.5)),
                ),
            ]
        }
        DirichletThinD3Plus => {
            let d = dimension(req, None)?;
            let (cd, cdm1) = (c_d(d), c_d(d - 1));
            let hh = h1(d)?.value;
            vec![
                b("A_d C_{d-1}/(C C_d)", a_d_const(d, vol)? * cdm1 / (c * cd)),
                b("C_{d-1} |Omega| H1/C", cdm1 * vol * hh / c),
            ]
        }
        NeumannThinD3Plus => {
            let d = dimension(req, None)?;
            let c1 = need(req.onset, "onset", case)?;
            conditional.push("onset".into());
            let (cd, cdm1, cdp1) = (c_d(d), c_d(d - 1), c_d(d + 1));
            let bd = b_d_const(d, vol)?;
            let hh = h2(d)?.value;
            let df = d as f64;
            vec![
                b("B_d C_{d-1}/(2 C C_d)", bd * cdm1 / (2.0 * c * cd)),
                b(
                    "3 pi B_d sqrt(d-1)/(2 C)",
                    bd * 3.0 * PI * (df - 1.0).sqrt() / (2.0 * c),
                ),
                b("|Omega| H2/(2 C_{d-1})", vol * hh / (2.0 * cdm1)),
                b("pi C_d |Omega| H2/(2 C)", PI * cd * vol * hh / (2.0 * c)),
                b(
                    "(C_{d+1} |Omega|)^-1 C_1^-(d+1)/2",
                    1.0 / (cdp1 * vol * c1.powf((df + 1.0) / 2.0)),
                ),
            ]
        }
        ManifoldDirichletD2 => {
            dimension(req, Some(2))?;
            vec![
                b("sqrt(|M| pi/48)", (vol * PI / 48.0).sqrt()),
                b("|M|/(8 pi C_1)", vol / (8.0 * PI * c)),
            ]
        }
        ManifoldDirichletD3Plus => {
            let d = dimension(req, None)?;
            let df = d as f64;
            let (cd, cdm1) = (c_d(d), c_d(d - 1));
            let ad = a_d_const(d, vol)?;
            let hh = h1(d)?.value;
            vec![
                b(
                    "pi (A_d/2)^{1/d} (d-1)^{(d-1)/(2d)}",
                    PI * (ad / 2.0).powf(1.0 / df) * (df - 1.0).powf((df - 1.0) / (2.0 * df)),
                ),
                b("A_d C_{d-1}/(2 C_1 C_d)", ad * cdm1 / (2.0 * c * cd)),
                b(
                    "pi (C_d |M| H1/2)^{1/d}",
                    PI * (cd * vol * hh / 2.0).powf(1.0 / df),
                ),
                b("C_{d-1} |M| H1/(2 C_1)", cdm1 * vol * hh / (2.0 * c)),
            ]
        }
    };
    let binding = branches
        .iter()
        .min_by(|x, y| x.value.total_cmp(&y.value))
        .expect("every case has a branch");
    Ok(ThresholdResult {
        case,
        value: binding.value,
        binding: binding.formula.clone(),
        conditional_on: conditional,
        branches: branches.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn req(case: ThresholdCase, volume: f64, remainder: f64) -> ThresholdRequest {
        ThresholdRequest {
            case,
            volume: Some(volume),
            remainder: Some(remainder),
            onset: None,
            dimension: None,
        }
    }

    #[test]
    fn surface_case() {
        let r = threshold_a0(&req(ThresholdCase::ManifoldDirichletD2, 4.0 * PI, 1.0)).unwrap();
        assert!((r.value - 0.5).abs() < 1e-15);
        assert!((r.branches[0].value - PI / 12f64.sqrt()).abs() < 1e-15);
        assert_eq!(r.binding, "|M|/(8 pi C_1)");
    }

    #[test]
    fn neumann_planar_first_branch() {
        let mut q = req(ThresholdCase::NeumannThinD2, 4.0 * PI, 1.0);
        assert!(matches!(threshold_a0(&q), Err(Error::Config(_))));
        q.onset = Some(1.0);
        let r = threshold_a0(&q).unwrap();
        assert!((r.branches[0].value - PI / 24.0).abs() < 1e-15);
        assert_eq!(r.conditional_on, ["remainder", "onset"]);
    }

    #[test]
    fn composite_planar_dirichlet() {
        let vol = 100.0 + 3f64.sqrt() / 4.0;
        let r = threshold_a0(&req(ThresholdCase::DirichletThinD2, vol, 50.0)).unwrap();
        assert!((r.value - vol / (400.0 * PI)).abs() < 1e-15);
        assert!(r.value >= 1.0 / (4.0 * PI));
    }

    #[test]
    fn higher_dimensional_cases() {
        let mut q = req(ThresholdCase::DirichletThinD3Plus, 1.0, 1.0);
        assert!(matches!(threshold_a0(&q), Err(Error::Config(_))));
        q.dimension = Some(2);
        assert!(matches!(threshold_a0(&q), Err(Error::Case(_))));
        q.dimension = Some(3);
        let r = threshold_a0(&q).unwrap();
        assert_eq!(r.branches.len(), 2);
        assert!(r.value > 0.0);
        let mut n = req(ThresholdCase::NeumannThinD3Plus, 1.0, 1.0);
        n.dimension = Some(4);
        n.onset = Some(2.0);
        assert_eq!(threshold_a0(&n).unwrap().branches.len(), 5);
        assert!("neumann_thin_d2".parse::<ThresholdCase>().is_ok());
        assert!("bogus".parse::<ThresholdCase>().is_err());
    }
}
