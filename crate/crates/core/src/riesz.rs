//! Riesz means `R_gamma(lambda) = sum_{lambda_k < lambda} (lambda - lambda_k)^gamma` and the
//! classical inequalities built on them: Berezin, Laptev (Neumann), Li-Yau, Kroger, and
//! empirical scans of the two-term Riesz bounds.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::{l_gamma_d, polya_weight};
use crate::counting::jump_points;
use crate::error::{Error, Result};
use crate::spectra::{BoundaryCondition, DomainMeta, EigenvalueStream};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundName {
    BerezinDirichlet,
    LaptevNeumann,
    LiYauSum,
    LiYauEigen,
    KrogerEigen,
    TwoTermRieszDirichlet,
    TwoTermRieszNeumann,
}

/// A named inequality with its parameters.
#[derive(Clone, Debug)]
pub struct BoundSpec {
    pub name: BoundName,
    pub gamma: f64,
    pub meta: DomainMeta,
}

impl BoundSpec {
    pub fn new(name: BoundName, gamma: f64, meta: DomainMeta) -> Result<Self> {
        if !(gamma >= 0.0) {
            return Err(Error::Domain(format!("gamma must be >= 0, got {gamma}")));
        }
        if matches!(name, BoundName::BerezinDirichlet | BoundName::LaptevNeumann) && gamma < 1.0 {
            return Err(Error::Precondition(format!(
                "{name:?} is stated for gamma >= 1, got {gamma}"
            )));
        }
        Ok(Self { name, gamma, meta })
    }
}

/// `sum_{v < lambda} mult(v) (lambda - v)^gamma`; `gamma = 0` gives the count.
pub fn riesz_mean(s: &EigenvalueStream, gamma: f64, lambda: f64) -> Result<f64> {
    if !(gamma >= 0.0) {
        return Err(Error::Domain(format!("gamma must be >= 0, got {gamma}")));
    }
    if !(lambda >= 0.0) {
        return Err(Error::Domain(format!("lambda must be >= 0, got {lambda}")));
    }
    if lambda > s.cutoff() {
        return Err(Error::Range(format!(
            "lambda {lambda} exceeds stream cutoff {}",
            s.cutoff()
        )));
    }
    Ok(s.levels()
        .iter()
        .take_while(|l| l.value < lambda)
        .map(|l| l.multiplicity as f64 * (lambda - l.value).powf(gamma))
        .sum())
}

fn require_bc(meta: &DomainMeta, bc: BoundaryCondition, what: &str) -> Result<()> {
    if meta.bc != bc {
        return Err(Error::BcMismatch(format!(
            "{what} needs a {bc:?} spectrum, got {:?}",
            meta.bc
        )));
    }
    Ok(())
}

fn require_gamma_ge_one(gamma: f64) -> Result<()> {
    if !(gamma >= 1.0) {
        return Err(Error::Precondition(format!(
            "the Riesz-mean inequalities need gamma >= 1, got {gamma}"
        )));
    }
    Ok(())
}

/// `L_{gamma,d} |Omega| lambda^{gamma + d/2}`.
pub fn riesz_weyl(meta: &DomainMeta, gamma: f64, lambda: f64) -> f64 {
    let d = meta.dimension;
    l_gamma_d(gamma, d) * meta.volume * lambda.powf(gamma + d as f64 / 2.0)
}

/// Berezin: `L_{gamma,d} |Omega| lambda^{gamma+d/2} - R_gamma(lambda)`, nonnegative for
/// Dirichlet spectra of Euclidean domains.
pub fn berezin_margin(
    s: &EigenvalueStream,
    meta: &DomainMeta,
    gamma: f64,
    lambda: f64,
) -> Result<f64> {
    require_gamma_ge_one(gamma)?;
    require_bc(meta, BoundaryCondition::Dirichlet, "Berezin")?;
    Ok(riesz_weyl(meta, gamma, lambda) - riesz_mean(s, gamma, lambda)?)
}

/// Laptev: `R_gamma(lambda) - L_{gamma,d} |Omega| lambda^{gamma+d/2}`, nonnegative for
/// Neumann spectra.
pub fn laptev_neumann_margin(
    s: &EigenvalueStream,
    meta: &DomainMeta,
    gamma: f64,
    lambda: f64,
) -> Result<f64> {
    require_gamma_ge_one(gamma)?;
    require_bc(meta, BoundaryCondition::Neumann, "Laptev")?;
    Ok(riesz_mean(s, gamma, lambda)? - riesz_weyl(meta, gamma, lambda))
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct LiYau {
    /// `sum_{j<=k} lambda_j - d/(d+2) W k^{(d+2)/d}`.
    pub sum_margin: f64,
    /// `lambda_k - d/(d+2) W k^{2/d}`.
    pub eigen_margin: f64,
}

/// Li-Yau lower bounds on the first `k` Dirichlet eigenvalues, `W` the Polya weight.
pub fn li_yau_checks(s: &EigenvalueStream, meta: &DomainMeta, k: u64) -> Result<LiYau> {
    require_bc(meta, BoundaryCondition::Dirichlet, "Li-Yau")?;
    if k == 0 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    if s.has_zero_mode() {
        return Err(Error::BcMismatch(
            "Dirichlet spectrum has a zero mode".into(),
        ));
    }
    if s.total() < k {
        return Err(Error::Range(format!(
            "stream holds {} eigenvalues, need {k}",
            s.total()
        )));
    }
    let d = meta.dimension as f64;
    let w = polya_weight(meta.dimension, meta.volume);
    let kf = k as f64;
    let sum: f64 = s.flatten().take(k as usize).sum();
    let lambda_k = s.value_at_position(k - 1).expect("checked total");
    Ok(LiYau {
        sum_margin: sum - d / (d + 2.0) * w * kf.powf((d + 2.0) / d),
        eigen_margin: lambda_k - d / (d + 2.0) * w * kf.powf(2.0 / d),
    })
}

/// Kroger: `((d+2)/2)^{2/d} W k^{2/d} - mu_k` for a Neumann spectrum indexed from 0.
pub fn kroger_check(s: &EigenvalueStream, meta: &DomainMeta, k: u64) -> Result<f64> {
    require_bc(meta, BoundaryCondition::Neumann, "Kroger")?;
    if k == 0 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    if !s.has_zero_mode() {
        return Err(Error::BcMismatch(
            "Neumann spectrum lacks the zero mode".into(),
        ));
    }
    let mu_k = s.value_at_position(k).ok_or_else(|| {
        Error::Range(format!(
            "mu_{k} is not below the cutoff {} (stream holds {} eigenvalues)",
            s.cutoff(),
            s.total()
        ))
    })?;
    let d = meta.dimension as f64;
    let w = polya_weight(meta.dimension, meta.volume);
    Ok(((d + 2.0) / 2.0).powf(2.0 / d) * w * (k as f64).powf(2.0 / d) - mu_k)
}

/// One row of a Riesz scan. Positive margins mean the bound holds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub lambda: f64,
    pub riesz: f64,
    pub bound: f64,
    pub margin: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TwoTermScan {
    pub gamma: f64,
    pub bc: BoundaryCondition,
    pub cutoff: f64,
    /// Smallest scanned `lambda` from which every later scanned margin is nonnegative;
    /// `None` when the last point fails.
    pub lambda_star: Option<f64>,
    /// Same quantity on the first half of the window.
    pub lambda_star_half: Option<f64>,
    /// Whether `lambda_star` agrees on the half and full window.
    pub stabilized: bool,
    pub worst_margin: f64,
    pub worst_location: f64,
    pub rows: Vec<ScanRow>,
}

fn onset(rows: &[ScanRow]) -> Option<f64> {
    match rows.iter().rposition(|r| r.margin < 0.0) {
        None => rows.first().map(|r| r.lambda),
        Some(i) => rows.get(i + 1).map(|r| r.lambda),
    }
}

/// Scan `L_{g,d}|Omega| lambda^{g+d/2} -+ (1/5) L_{g,d-1} |dOmega| lambda^{g+(d-1)/2}`
/// (minus for Dirichlet, plus for Neumann) against the Riesz mean at every jump in
/// `(0, cutoff]` and the midpoints between jumps.
pub fn two_term_riesz_scan(
    s: &EigenvalueStream,
    meta: &DomainMeta,
    gamma: f64,
    cutoff: f64,
) -> Result<TwoTermScan> {
    if !(gamma >= 0.0) {
        return Err(Error::Domain(format!("gamma must be >= 0, got {gamma}")));
    }
    let area = meta
        .surface_area
        .ok_or_else(|| Error::Config("two-term Riesz scan needs the surface area".into()))?;
    let sign = match meta.bc {
        BoundaryCondition::Dirichlet => -1.0,
        BoundaryCondition::Neumann => 1.0,
        BoundaryCondition::Closed => {
            return Err(Error::BcMismatch(
                "two-term Riesz bounds need a boundary".into(),
            ))
        }
    };
    if cutoff > s.cutoff() {
        return Err(Error::Range(format!(
            "scan cutoff {cutoff} exceeds stream cutoff {}",
            s.cutoff()
        )));
    }
    let d = meta.dimension;
    let l_lead = l_gamma_d(gamma, d) * meta.volume;
    let l_bdry = l_gamma_d(gamma, d - 1) * area / 5.0;
    let jumps: Vec<f64> = jump_points(s)
        .iter()
        .map(|j| j.lambda)
        .filter(|&l| l > 0.0 && l <= cutoff)
        .collect();
    let mut points = Vec::with_capacity(2 * jumps.len() + 1);
    for (i, &l) in jumps.iter().enumerate() {
        points.push(l);
        let next = jumps.get(i + 1).copied().unwrap_or(cutoff);
        if next > l {
            points.push(0.5 * (l + next));
        }
    }
    if points.is_empty() {
        points.push(cutoff);
    }
    let dh = d as f64 / 2.0;
    let rows: Vec<ScanRow> = points
        .par_iter()
        .map(|&lambda| {
            let riesz = riesz_mean(s, gamma, lambda)?;
            let bound =
                l_lead * lambda.powf(gamma + dh) + sign * l_bdry * lambda.powf(gamma + dh - 0.5);
            let margin = match meta.bc {
                BoundaryCondition::Dirichlet => bound - riesz,
                _ => riesz - bound,
            };
            Ok(ScanRow {
                lambda,
                riesz,
                bound,
                margin,
            })
        })
        .collect::<Result<_>>()?;
    let worst = rows
        .iter()
        .min_by(|a, b| a.margin.total_cmp(&b.margin))
        .copied()
        .expect("at least one point");
    let half: Vec<ScanRow> = rows
        .iter()
        .copied()
        .filter(|r| r.lambda <= cutoff / 2.0)
        .collect();
    let lambda_star = onset(&rows);
    let lambda_star_half = onset(&half);
    Ok(TwoTermScan {
        gamma,
        bc: meta.bc,
        cutoff,
        lambda_star,
        lambda_star_half,
        stabilized: lambda_star.is_some() && lambda_star == lambda_star_half,
        worst_margin: worst.margin,
        worst_location: worst.lambda,
        rows,
    })
}

/// Write scan rows as CSV with header `lambda,riesz,bound,margin`.
pub fn write_scan_rows<W: std::io::Write>(rows: &[ScanRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// The inf/sup constants of a first factor `Omega_1` in a product with a
/// `d2`-dimensional second factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KConstant {
    /// `inf (L_{d2/2,d1}|Omega_1| mu^{(d1+d2)/2} - R_{d2/2}(mu)) / mu^{(d1+d2-1)/2}`.
    K,
    /// `inf (R_{d2/2}(mu) - L_{d2/2,d1}|Omega_1| mu^{(d1+d2)/2}) / mu^{(d1+d2-1)/2}`.
    K1,
    /// `sup R_{(d2-1)/2}(mu) / mu^{(d1+d2-1)/2}`.
    K2,
}

#[derive(Clone, Debug, Serialize)]
pub struct KScan {
    pub kind: KConstant,
    pub window: (f64, f64),
    pub value: f64,
    pub location: f64,
    pub checked: usize,
}

/// Evaluate a K-type constant over `window = [A, B]` at every jump inside it, the window
/// ends, and `grid` evenly spaced points.
pub fn k_constant_scan(
    s: &EigenvalueStream,
    meta: &DomainMeta,
    kind: KConstant,
    d2: u32,
    window: (f64, f64),
    grid: usize,
) -> Result<KScan> {
    let (a, b) = window;
    if !(a > 0.0 && a <= b) {
        return Err(Error::Domain(format!("invalid window [{a}, {b}]")));
    }
    if b > s.cutoff() {
        return Err(Error::Range(format!(
            "window end {b} exceeds stream cutoff {}",
            s.cutoff()
        )));
    }
    if d2 == 0 {
        return Err(Error::Domain("d2 must be at least 1".into()));
    }
    let d1 = meta.dimension;
    let g = d2 as f64 / 2.0;
    let lead = l_gamma_d(g, d1) * meta.volume;
    let top = (d1 + d2) as f64 / 2.0;
    let mut points: Vec<f64> = jump_points(s)
        .iter()
        .map(|j| j.lambda)
        .filter(|&l| l >= a && l <= b)
        .collect();
    points.push(a);
    points.push(b);
    let n = grid.max(1);
    points.extend((0..=n).map(|i| a + (b - a) * i as f64 / n as f64));
    points.sort_by(f64::total_cmp);
    points.dedup();
    let vals: Vec<(f64, f64)> = points
        .par_iter()
        .map(|&mu| {
            let den = mu.powf(top - 0.5);
            let v = match kind {
                KConstant::K => (lead * mu.powf(top) - riesz_mean(s, g, mu)?) / den,
                KConstant::K1 => (riesz_mean(s, g, mu)? - lead * mu.powf(top)) / den,
                KConstant::K2 => riesz_mean(s, g - 0.5, mu)? / den,
            };
            Ok((mu, v))
        })
        .collect::<Result<_>>()?;
    let pick = |x: &&(f64, f64), y: &&(f64, f64)| x.1.total_cmp(&y.1);
    let best = match kind {
        KConstant::K2 => vals.iter().max_by(pick),
        _ => vals.iter().min_by(pick),
    }
    .copied()
    .expect("window has points");
    Ok(KScan {
        kind,
        window,
        value: best.1,
        location: best.0,
        checked: vals.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Length;
    use crate::spectra::{box_spectrum, interval_spectrum, sphere2_spectrum, BoundaryCondition::*};
    use std::f64::consts::PI;

    #[test]
    fn riesz_examples() {
        let s = sphere2_spectrum(7.0).unwrap();
        assert_eq!(riesz_mean(&s, 1.0, 6.0).unwrap(), 18.0);
        assert_eq!(riesz_mean(&s, 0.0, 6.0).unwrap(), 4.0);
        let i = interval_spectrum(1.0, Dirichlet, 20.0).unwrap();
        assert!((riesz_mean(&i, 1.0, PI * PI + 1.0).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(riesz_mean(&i, 1.0, 21.0), Err(Error::Range(_))));
    }

    #[test]
    fn berezin_gamma_precondition() {
        let i = interval_spectrum(1.0, Dirichlet, 20.0).unwrap();
        let m = DomainMeta::interval(&Length::from(1.0), Dirichlet).unwrap();
        assert!(matches!(
            berezin_margin(&i, &m, 0.5, 10.0),
            Err(Error::Precondition(_))
        ));
        assert!(berezin_margin(&i, &m, 1.0, 5.0).unwrap() > 0.0);
        assert!(BoundSpec::new(BoundName::LaptevNeumann, 0.9, m).is_err());
    }

    #[test]
    fn li_yau_first_eigenvalue_of_interval() {
        let i = interval_spectrum(1.0, Dirichlet, 20.0).unwrap();
        let m = DomainMeta::interval(&Length::from(1.0), Dirichlet).unwrap();
        let ly = li_yau_checks(&i, &m, 1).unwrap();
        assert!((ly.eigen_margin - (PI * PI - PI * PI / 3.0)).abs() < 1e-12);
        assert!(matches!(li_yau_checks(&i, &m, 5), Err(Error::Range(_))));
    }

    #[test]
    fn kroger_rejects_closed() {
        let s = sphere2_spectrum(30.0).unwrap();
        assert!(matches!(
            kroger_check(&s, &DomainMeta::sphere2(), 1),
            Err(Error::BcMismatch(_))
        ));
        let sides = [Length::from(1.0), Length::from(1.0)];
        let sq = box_spectrum(&sides, Neumann, 30.0).unwrap();
        let m = DomainMeta::boxed(&sides, Neumann).unwrap();
        // mu_1 = pi^2, bound 2 * 4 pi = 8 pi
        assert!((kroger_check(&sq, &m, 1).unwrap() - (8.0 * PI - PI * PI)).abs() < 1e-12);
    }

    #[test]
    fn two_term_scan_needs_area() {
        let s = sphere2_spectrum(30.0).unwrap();
        let m = DomainMeta::new(2, 4.0 * PI, Neumann).unwrap();
        assert!(matches!(
            two_term_riesz_scan(&s, &m, 1.0, 30.0),
            Err(Error::Config(_))
        ));
    }
}
