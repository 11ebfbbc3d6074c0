//! Polya's inequalities, checked eigenvalue by eigenvalue or on counting functions.
//!
//! Dirichlet: `lambda_k >= w_k`, Neumann: `mu_k <= w_k`, where
//! `w_k = 4 pi^2 / (omega_d |Omega|)^{2/d} k^{2/d}`. Raised to the power `d` this reads
//! `lambda_k^d >= K k^2` with `K = (4 pi^2)^d / (omega_d |Omega|)^2`, which is checked in
//! integer arithmetic when both the spectrum and `K` are rational multiples of the same
//! power of pi.

use std::cmp::Ordering;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use twofloat::TwoFloat;

use crate::constants::{omega_d_exact, polya_power_constant, polya_weight};
use crate::counting::{CountRow, CountingFunction, Side};
use crate::error::{Error, Result};
use crate::exact::PiRational;
use crate::spectra::{BoundaryCondition, DomainMeta, EigenvalueStream};

/// Relative margin below which a float comparison is re-evaluated at higher precision.
pub const GUARD_BAND: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    PerEigenvalue,
    CountingJumps,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
}

/// Eigenvalue index or spectral parameter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Location {
    Index(u64),
    Lambda(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub location: Location,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub mode: Mode,
    /// How the comparisons were decided: `float`, `exact`, or `float+exact`.
    pub arithmetic: String,
    pub requested: Option<u64>,
    pub checked: u64,
    /// True when fewer comparisons than requested were possible.
    pub truncated: bool,
    pub verdict: Verdict,
    /// Smallest relative margin; negative exactly when some comparison fails.
    pub worst_margin: f64,
    pub worst_location: Option<Location>,
    /// Comparisons that fell inside the guard band and were re-decided.
    pub tie_breaks: u64,
    pub failures: Vec<Failure>,
}

impl VerificationReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

/// Per-index row of a Polya check: `k, eigenvalue, bound, margin` (relative).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PolyaRow {
    pub k: u64,
    pub eigenvalue: f64,
    pub bound: f64,
    pub margin: f64,
}

// Integer comparison of `(u * scale)^d` against `K k^2`.
struct ExactCmp {
    d: u32,
    lhs: BigInt,
    rhs: BigInt,
}

impl ExactCmp {
    fn new(scale: &PiRational, constant: &PiRational, d: u32) -> Option<Self> {
        if scale.pi_power() * d as i32 != constant.pi_power() {
            return None;
        }
        if !scale.is_positive() || !constant.is_positive() {
            return None;
        }
        let (sn, sd) = (scale.coeff().numer(), scale.coeff().denom());
        let (cn, cd) = (constant.coeff().numer(), constant.coeff().denom());
        Some(Self {
            d,
            lhs: num_traits::pow(sn.clone(), d as usize) * cd,
            rhs: cn * num_traits::pow(sd.clone(), d as usize),
        })
    }

    /// Ordering of `(u * scale)^d` relative to `K k^2`.
    fn cmp(&self, units: u64, k: u64) -> Ordering {
        let l = num_traits::pow(BigInt::from(units), self.d as usize) * &self.lhs;
        let r = BigInt::from(k) * BigInt::from(k) * &self.rhs;
        l.cmp(&r)
    }
}

// `K = (4 pi^2)^d / (omega_d V)^2` in double-double.
fn power_constant_dd(d: u32, volume: f64) -> TwoFloat {
    let omega = omega_d_exact(d);
    let num = omega
        .coeff()
        .numer()
        .to_string()
        .parse::<f64>()
        .unwrap_or(f64::INFINITY);
    let den = omega
        .coeff()
        .denom()
        .to_string()
        .parse::<f64>()
        .unwrap_or(f64::INFINITY);
    let pi = twofloat::consts::PI;
    let omega = TwoFloat::from(num) / TwoFloat::from(den) * pi.powi(omega.pi_power());
    let four_pi2 = TwoFloat::from(4.0) * pi * pi;
    four_pi2.powi(d as i32) / (omega * TwoFloat::from(volume)).powi(2)
}

struct Checker {
    d: u32,
    weight: f64,
    dirichlet: bool,
    exact: Option<ExactCmp>,
    dd_constant: TwoFloat,
}

struct Outcome {
    margin: f64,
    holds: bool,
    tie_break: bool,
}

impl Checker {
    fn new(s: &EigenvalueStream, meta: &DomainMeta, dirichlet: bool) -> Self {
        let d = meta.dimension;
        let exact = match (s.exact(), &meta.exact_volume) {
            (Some(e), Some(v)) => ExactCmp::new(&e.scale, &polya_power_constant(d, v), d),
            _ => None,
        };
        Self {
            d,
            weight: polya_weight(d, meta.volume),
            dirichlet,
            exact,
            dd_constant: power_constant_dd(d, meta.volume),
        }
    }

    fn bound(&self, k: u64) -> f64 {
        self.weight * (k as f64).powf(2.0 / self.d as f64)
    }

    fn check(&self, value: f64, units: Option<u64>, k: u64) -> Outcome {
        let w = self.bound(k);
        let margin = if self.dirichlet {
            (value - w) / w
        } else {
            (w - value) / w
        };
        if margin.abs() >= GUARD_BAND {
            return Outcome {
                margin,
                holds: margin >= 0.0,
                tie_break: false,
            };
        }
        let ord = match (&self.exact, units) {
            (Some(e), Some(u)) => e.cmp(u, k),
            _ => {
                let lhs = TwoFloat::from(value).powi(self.d as i32);
                let rhs = self.dd_constant * TwoFloat::from(k as f64) * TwoFloat::from(k as f64);
                lhs.partial_cmp(&rhs).unwrap_or(Ordering::Equal)
            }
        };
        let holds = if self.dirichlet {
            ord != Ordering::Less
        } else {
            ord != Ordering::Greater
        };
        Outcome {
            margin: if holds {
                margin.max(0.0)
            } else {
                margin.min(-f64::MIN_POSITIVE)
            },
            holds,
            tie_break: true,
        }
    }
}

fn arithmetic_label(exact_available: bool, tie_breaks: u64) -> String {
    match (tie_breaks > 0, exact_available) {
        (false, _) => "float".into(),
        (true, true) => "float+exact".into(),
        (true, false) => "float+double-double".into(),
    }
}

// Shared driver: positions `first..first+n` of the flattened stream, index `k = pos + shift`.
fn run_per_eigenvalue(
    s: &EigenvalueStream,
    meta: &DomainMeta,
    k_max: u64,
    dirichlet: bool,
) -> Result<VerificationReport> {
    let checker = Checker::new(s, meta, dirichlet);
    // Dirichlet: lambda_k sits at position k-1. Neumann: mu_k at position k.
    let shift = if dirichlet { 1 } else { 0 };
    let available = if dirichlet {
        s.total()
    } else {
        s.total().saturating_sub(1)
    };
    let n = k_max.min(available);
    let units = s.exact().map(|e| &e.units);

    let results: Vec<(u64, f64, Outcome)> = (1..=n)
        .into_par_iter()
        .map(|k| {
            let pos = k - shift;
            let level = s.level_of_position(pos).expect("position below total");
            let value = s.levels()[level].value;
            let u = units.map(|u| u[level]);
            (k, value, checker.check(value, u, k))
        })
        .collect();

    let mut worst: Option<(f64, u64)> = None;
    let mut failures = Vec::new();
    let mut tie_breaks = 0;
    for (k, value, o) in &results {
        if o.tie_break {
            tie_breaks += 1;
        }
        if worst.is_none_or(|(m, _)| o.margin < m) {
            worst = Some((o.margin, *k));
        }
        if !o.holds {
            failures.push(Failure {
                location: Location::Index(*k),
                lhs: *value,
                rhs: checker.bound(*k),
            });
        }
    }
    Ok(VerificationReport {
        mode: Mode::PerEigenvalue,
        arithmetic: arithmetic_label(checker.exact.is_some(), tie_breaks),
        requested: Some(k_max),
        checked: n,
        truncated: n < k_max,
        verdict: if failures.is_empty() {
            Verdict::Holds
        } else {
            Verdict::Fails
        },
        worst_margin: worst.map_or(f64::INFINITY, |w| w.0),
        worst_location: worst.map(|w| Location::Index(w.1)),
        tie_breaks,
        failures,
    })
}

/// Check `lambda_k >= w_k` for `k = 1..=k_max` (or as many eigenvalues as the stream has).
pub fn verify_dirichlet(
    s: &EigenvalueStream,
    meta: &DomainMeta,
    k_max: u64,
) -> Result<VerificationReport> {
    if meta.bc != BoundaryCondition::Dirichlet {
        return Err(Error::BcMismatch(format!(
            "Dirichlet check on a {:?} domain",
            meta.bc
        )));
    }
    if s.is_empty() {
        return Err(Error::NothingToCheck("empty spectrum".into()));
    }
    if s.has_zero_mode() {
        return Err(Error::BcMismatch(
            "Dirichlet spectrum has a zero mode".into(),
        ));
    }
    run_per_eigenvalue(s, meta, k_max, true)
}

/// Check `mu_k <= w_k` for `k = 1..=k_max`; the zero mode `k = 0` is skipped.
pub fn verify_neumann(
    s: &EigenvalueStream,
    meta: &DomainMeta,
    k_max: u64,
) -> Result<VerificationReport> {
    if meta.bc == BoundaryCondition::Dirichlet {
        return Err(Error::BcMismatch(
            "Neumann check on a Dirichlet domain".into(),
        ));
    }
    if s.is_empty() {
        return Err(Error::NothingToCheck("empty spectrum".into()));
    }
    if !s.has_zero_mode() {
        return Err(Error::BcMismatch(
            "Neumann spectrum lacks the zero mode".into(),
        ));
    }
    run_per_eigenvalue(s, meta, k_max, false)
}

/// The rational constant `K = (4 pi^2)^d / (omega_d |Omega|)^2`; needs an exact volume.
pub fn polya_exact_constant(meta: &DomainMeta) -> Result<PiRational> {
    let v = meta
        .exact_volume
        .as_ref()
        .ok_or_else(|| Error::Mode("exact Polya constant needs an exactly known volume".into()))?;
    Ok(polya_power_constant(meta.dimension, v))
}

/// Integer-only check of `lambda_k^d >= K k^2` (Dirichlet) or `mu_k^d <= K k^2` (Neumann)
/// for an exact stream. `K` is supplied by the caller, e.g. from [`polya_exact_constant`].
pub fn verify_exact(
    s: &EigenvalueStream,
    d: u32,
    bc: BoundaryCondition,
    constant: &PiRational,
    k_max: u64,
) -> Result<VerificationReport> {
    let e = s
        .exact()
        .ok_or_else(|| Error::Mode("exact verification needs an exact stream".into()))?;
    if d == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    let cmp = ExactCmp::new(&e.scale, constant, d).ok_or_else(|| {
        Error::Mode(format!(
            "eigenvalue scale {} to the power {d} and constant {constant} are not commensurable",
            e.scale
        ))
    })?;
    if s.is_empty() {
        return Err(Error::NothingToCheck("empty spectrum".into()));
    }
    let dirichlet = match bc {
        BoundaryCondition::Dirichlet => {
            if s.has_zero_mode() {
                return Err(Error::BcMismatch(
                    "Dirichlet spectrum has a zero mode".into(),
                ));
            }
            true
        }
        _ => {
            if !s.has_zero_mode() {
                return Err(Error::BcMismatch(
                    "Neumann spectrum lacks the zero mode".into(),
                ));
            }
            false
        }
    };
    let shift = if dirichlet { 1 } else { 0 };
    let available = if dirichlet { s.total() } else { s.total() - 1 };
    let n = k_max.min(available);
    let kf = constant.to_f64();

    let results: Vec<(u64, usize, Ordering)> = (1..=n)
        .into_par_iter()
        .map(|k| {
            let level = s
                .level_of_position(k - shift)
                .expect("position below total");
            (k, level, cmp.cmp(e.units[level], k))
        })
        .collect();

    let mut worst: Option<(f64, u64)> = None;
    let mut failures = Vec::new();
    for &(k, level, ord) in &results {
        let value = s.levels()[level].value;
        let w = (kf * (k as f64).powi(2)).powf(1.0 / d as f64);
        let holds = if dirichlet {
            ord != Ordering::Less
        } else {
            ord != Ordering::Greater
        };
        let raw = if dirichlet {
            (value - w) / w
        } else {
            (w - value) / w
        };
        let margin = if holds {
            raw.max(0.0)
        } else {
            raw.min(-f64::MIN_POSITIVE)
        };
        if worst.is_none_or(|(m, _)| margin < m) {
            worst = Some((margin, k));
        }
        if !holds {
            failures.push(Failure {
                location: Location::Index(k),
                lhs: value,
                rhs: w,
            });
        }
    }
    Ok(VerificationReport {
        mode: Mode::PerEigenvalue,
        arithmetic: "exact".into(),
        requested: Some(k_max),
        checked: n,
        truncated: n < k_max,
        verdict: if failures.is_empty() {
            Verdict::Holds
        } else {
            Verdict::Fails
        },
        worst_margin: worst.map_or(f64::INFINITY, |w| w.0),
        worst_location: worst.map(|w| Location::Index(w.1)),
        tie_breaks: 0,
        failures,
    })
}

/// Per-index margins, for dumping.
pub fn polya_margins(s: &EigenvalueStream, meta: &DomainMeta, k_max: u64) -> Result<Vec<PolyaRow>> {
    let dirichlet = match meta.bc {
        BoundaryCondition::Dirichlet => true,
        _ if s.has_zero_mode() => false,
        _ => {
            return Err(Error::BcMismatch(
                "Neumann spectrum lacks the zero mode".into(),
            ))
        }
    };
    let weight = polya_weight(meta.dimension, meta.volume);
    let shift = if dirichlet { 1 } else { 0 };
    let available = if dirichlet {
        s.total()
    } else {
        s.total().saturating_sub(1)
    };
    Ok((1..=k_max.min(available))
        .map(|k| {
            let value = s
                .value_at_position(k - shift)
                .expect("position below total");
            let w = weight * (k as f64).powf(2.0 / meta.dimension as f64);
            let margin = if dirichlet {
                (value - w) / w
            } else {
                (w - value) / w
            };
            PolyaRow {
                k,
                eigenvalue: value,
                bound: w,
                margin,
            }
        })
        .collect())
}

/// Write per-index margins as CSV with header `k,eigenvalue,bound,margin`.
pub fn write_polya_rows<W: std::io::Write>(rows: &[PolyaRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Check a counting function against a monotone bound over `window = [lo, hi]`.
///
/// Upper: `N(lambda+) <= bound(lambda)` at `lo` and every jump, which for an increasing
/// bound is equivalent to `N(lambda) < bound(lambda)` on the whole window. Lower:
/// `N(lambda) >= bound(lambda)` at every jump and at `hi`. Margins in the report are
/// relative to `max(|bound|, 1)`; the returned rows carry absolute margins.
pub fn verify_counting_bound(
    cf: &CountingFunction,
    bound: &(dyn Fn(f64) -> f64 + Sync),
    window: (f64, f64),
    side: Side,
) -> Result<(VerificationReport, Vec<CountRow>)> {
    let (lo, hi) = window;
    if !(lo >= 0.0 && lo <= hi) {
        return Err(Error::Domain(format!("invalid window [{lo}, {hi}]")));
    }
    let jumps = cf.jumps(lo, hi)?;
    let mut points: Vec<(f64, u64)> = Vec::with_capacity(jumps.len() + 1);
    match side {
        Side::Upper => {
            if jumps.first().is_none_or(|j| j.lambda > lo) {
                points.push((lo, cf.count(lo)?));
            }
            points.extend(jumps.iter().map(|j| (j.lambda, j.after)));
        }
        Side::Lower => {
            points.extend(jumps.iter().map(|j| (j.lambda, j.before)));
            if jumps.last().is_none_or(|j| j.lambda < hi) {
                points.push((hi, cf.count(hi)?));
            }
        }
    }
    let rows: Vec<CountRow> = points
        .par_iter()
        .map(|&(lambda, count)| {
            let b = bound(lambda);
            let margin = match side {
                Side::Upper => b - count as f64,
                Side::Lower => count as f64 - b,
            };
            CountRow {
                lambda,
                count,
                bound: b,
                margin,
            }
        })
        .collect();
    let mut worst: Option<(f64, f64)> = None;
    let mut failures = Vec::new();
    let mut tie_breaks = 0;
    for r in &rows {
        let rel = r.margin / r.bound.abs().max(1.0);
        if rel.abs() < GUARD_BAND {
            tie_breaks += 1;
        }
        if worst.is_none_or(|(m, _)| rel < m) {
            worst = Some((rel, r.lambda));
        }
        if r.margin < 0.0 {
            failures.push(Failure {
                location: Location::Lambda(r.lambda),
                lhs: r.count as f64,
                rhs: r.bound,
            });
        }
    }
    let report = VerificationReport {
        mode: Mode::CountingJumps,
        arithmetic: "float".into(),
        requested: None,
        checked: rows.len() as u64,
        truncated: false,
        verdict: if failures.is_empty() {
            Verdict::Holds
        } else {
            Verdict::Fails
        },
        worst_margin: worst.map_or(f64::INFINITY, |w| w.0),
        worst_location: worst.map(|w| Location::Lambda(w.1)),
        tie_breaks,
        failures,
    };
    Ok((report, rows))
}
