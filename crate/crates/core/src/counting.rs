//! Eigenvalue counting functions `N(lambda) = #{k : lambda_k < lambda}`, the product
//! decomposition, Weyl terms, and empirical remainder constants.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::c_d;
use crate::error::{Error, Result};
use crate::spectra::{
    triangle_neumann_counting, triangle_neumann_spectrum, DomainMeta, EigenvalueStream,
};

/// Which side of a one-sided bound is meant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Upper,
    Lower,
}

impl std::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "upper" => Ok(Side::Upper),
            "lower" => Ok(Side::Lower),
            _ => Err(Error::Config(format!(
                "unknown side {s:?}, expected upper or lower"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub enum CountSource {
    Stream(EigenvalueStream),
    /// Closed-form Neumann count of the unit equilateral triangle; valid for every lambda.
    TriangleNeumann,
}

/// A counting function together with the geometry of its domain.
#[derive(Clone, Debug)]
pub struct CountingFunction {
    pub source: CountSource,
    pub meta: DomainMeta,
}

/// A discontinuity of a counting function: `N(lambda)` and `N(lambda+)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Jump {
    pub lambda: f64,
    pub before: u64,
    pub after: u64,
}

impl CountingFunction {
    pub fn from_stream(stream: EigenvalueStream, meta: DomainMeta) -> Self {
        Self {
            source: CountSource::Stream(stream),
            meta,
        }
    }

    pub fn triangle_neumann() -> Self {
        Self {
            source: CountSource::TriangleNeumann,
            meta: DomainMeta::unit_triangle(crate::spectra::BoundaryCondition::Neumann),
        }
    }

    /// Largest lambda at which the function can be evaluated.
    pub fn cutoff(&self) -> f64 {
        match &self.source {
            CountSource::Stream(s) => s.cutoff(),
            CountSource::TriangleNeumann => f64::INFINITY,
        }
    }

    /// `N(lambda)`, strict inequality.
    pub fn count(&self, lambda: f64) -> Result<u64> {
        check_lambda(lambda)?;
        match &self.source {
            CountSource::Stream(s) => {
                check_cutoff(s, lambda)?;
                Ok(s.count_below(lambda))
            }
            CountSource::TriangleNeumann if lambda == 0.0 => Ok(0),
            CountSource::TriangleNeumann => triangle_neumann_counting(lambda),
        }
    }

    /// Jumps with `lo <= lambda <= hi`. For a stream, `hi` may equal the cutoff; an
    /// eigenvalue sitting exactly at the cutoff is then not in the list.
    pub fn jumps(&self, lo: f64, hi: f64) -> Result<Vec<Jump>> {
        check_lambda(lo)?;
        check_lambda(hi)?;
        match &self.source {
            CountSource::Stream(s) => {
                check_cutoff(s, hi)?;
                Ok(jump_points(s)
                    .into_iter()
                    .filter(|j| j.lambda >= lo && j.lambda <= hi)
                    .collect())
            }
            CountSource::TriangleNeumann => {
                let cutoff = hi + hi * 4.0 * f64::EPSILON + f64::MIN_POSITIVE;
                let s = triangle_neumann_spectrum(cutoff)?;
                Ok(jump_points(&s)
                    .into_iter()
                    .filter(|j| j.lambda >= lo && j.lambda <= hi)
                    .collect())
            }
        }
    }

    /// `N(lambda+)`, the count of eigenvalues `<= lambda`. Needs `lambda < cutoff`.
    pub fn count_right(&self, lambda: f64) -> Result<u64> {
        check_lambda(lambda)?;
        match &self.source {
            CountSource::Stream(s) => {
                if lambda >= s.cutoff() {
                    return Err(Error::Range(format!(
                        "right limit at {lambda} needs a cutoff above it, stream cutoff is {}",
                        s.cutoff()
                    )));
                }
                Ok(s.count_at_most(lambda))
            }
            CountSource::TriangleNeumann => {
                let j = self.jumps(lambda, lambda)?;
                match j.first() {
                    Some(j) => Ok(j.after),
                    None => self.count(lambda),
                }
            }
        }
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!(
            "lambda must be finite and >= 0, got {lambda}"
        )));
    }
    Ok(())
}

fn check_cutoff(s: &EigenvalueStream, lambda: f64) -> Result<()> {
    if lambda > s.cutoff() {
        return Err(Error::Range(format!(
            "lambda {lambda} exceeds stream cutoff {}",
            s.cutoff()
        )));
    }
    Ok(())
}

/// `N(lambda)` for a stream.
pub fn count(s: &EigenvalueStream, lambda: f64) -> Result<u64> {
    check_lambda(lambda)?;
    check_cutoff(s, lambda)?;
    Ok(s.count_below(lambda))
}

/// Counting function of a product through the decomposition
/// `N_{1x2}(lambda) = sum_{v in s1, v < lambda} mult(v) N_2(lambda - v)`.
pub fn product_count(s1: &EigenvalueStream, cf2: &CountingFunction, lambda: f64) -> Result<u64> {
    check_lambda(lambda)?;
    check_cutoff(s1, lambda)?;
    let mut total = 0u64;
    for l in s1.levels() {
        if l.value >= lambda {
            break;
        }
        let n2 = cf2.count(lambda - l.value)?;
        total = n2
            .checked_mul(l.multiplicity)
            .and_then(|x| total.checked_add(x))
            .ok_or_else(|| Error::Overflow("product count exceeds u64".into()))?;
    }
    Ok(total)
}

/// Weyl leading term `C_d |Omega| lambda^{d/2}`.
pub fn weyl_leading(meta: &DomainMeta, lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 0.0;
    }
    c_d(meta.dimension) * meta.volume * lambda.powf(meta.dimension as f64 / 2.0)
}

/// `C_d |Omega| lambda^{d/2} +- C lambda^{(d-1)/2}`.
pub fn two_term_bound(meta: &DomainMeta, c: f64, lambda: f64, side: Side) -> f64 {
    if lambda <= 0.0 {
        return 0.0;
    }
    let rem = c * lambda.powf((meta.dimension as f64 - 1.0) / 2.0);
    match side {
        Side::Upper => weyl_leading(meta, lambda) + rem,
        Side::Lower => weyl_leading(meta, lambda) - rem,
    }
}

/// One `(lambda, N(lambda), N(lambda+))` triple per distinct eigenvalue.
pub fn jump_points(s: &EigenvalueStream) -> Vec<Jump> {
    let mut before = 0;
    s.levels()
        .iter()
        .map(|l| {
            let j = Jump {
                lambda: l.value,
                before,
                after: before + l.multiplicity,
            };
            before = j.after;
            j
        })
        .collect()
}

/// Empirical two-term remainder constant over a window.
#[derive(Clone, Debug, Serialize)]
pub struct SeeleyEstimate {
    pub side: Side,
    pub window: (f64, f64),
    pub value: f64,
    /// Where the supremum is attained; `None` when the remainder never has the tested sign.
    pub location: Option<f64>,
    /// Up to five largest `(lambda, ratio)` pairs, largest first.
    pub top: Vec<(f64, f64)>,
    pub checked: usize,
}

const SEELEY_TOP: usize = 5;

/// Relative size below which a remainder is treated as rounding noise.
const SEELEY_NOISE: f64 = 1e-9;

/// Supremum over `[lo, hi]` of the one-sided remainder ratio
///
/// * upper: `max(0, N(lambda+) - W(lambda)) / lambda^{(d-1)/2}` at `lo` and at every jump;
/// * lower: `max(0, W(lambda) - N(lambda)) / lambda^{(d-1)/2}` at every jump and at `hi`,
///
/// with `W` the Weyl leading term. Between jumps the ratio is monotone, so these points
/// attain the supremum over the whole window. `lambda = 0` is skipped.
pub fn estimate_seeley_constant(
    cf: &CountingFunction,
    window: (f64, f64),
    side: Side,
) -> Result<SeeleyEstimate> {
    let (lo, hi) = window;
    if !(lo >= 0.0 && lo < hi) {
        return Err(Error::Domain(format!("invalid window [{lo}, {hi}]")));
    }
    let jumps = cf.jumps(lo, hi)?;
    if jumps.iter().all(|j| j.lambda <= 0.0) {
        return Err(Error::UndefinedEstimate(format!(
            "no positive jump points in [{lo}, {hi}]"
        )));
    }
    let mut points: Vec<(f64, u64)> = Vec::with_capacity(jumps.len() + 1);
    match side {
        Side::Upper => {
            if lo > 0.0 && jumps.first().is_none_or(|j| j.lambda > lo) {
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
    points.retain(|p| p.0 > 0.0);

    let meta = &cf.meta;
    let half = (meta.dimension as f64 - 1.0) / 2.0;
    let mut ratios: Vec<(f64, f64)> = points
        .par_iter()
        .map(|&(lambda, n)| {
            let w = weyl_leading(meta, lambda);
            let n = n as f64;
            let excess = match side {
                Side::Upper => n - w,
                Side::Lower => w - n,
            };
            let excess = if excess <= SEELEY_NOISE * n.max(w) {
                0.0
            } else {
                excess
            };
            (lambda, excess / lambda.powf(half))
        })
        .collect();
    let checked = ratios.len();
    ratios.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.total_cmp(&b.0)));
    ratios.retain(|r| r.1 > 0.0);
    ratios.truncate(SEELEY_TOP);
    Ok(SeeleyEstimate {
        side,
        window,
        value: ratios.first().map_or(0.0, |r| r.1),
        location: ratios.first().map(|r| r.0),
        top: ratios,
        checked,
    })
}

/// Last `lambda` in `[lo, hi]` at which `N(lambda) > slope * lambda` fails, i.e. the
/// inequality holds on `(onset, hi]`. `None` when it holds on the whole window.
///
/// Between jumps `N` is constant, so failures are detected at the jumps (value
/// `N(lambda_j)`) and at `hi`. Near-equality within `1e-12` relative counts as failure.
pub fn weyl_onset(cf: &CountingFunction, slope: f64, window: (f64, f64)) -> Result<Option<f64>> {
    let (lo, hi) = window;
    if !(lo >= 0.0 && lo < hi) {
        return Err(Error::Domain(format!("invalid window [{lo}, {hi}]")));
    }
    let mut points: Vec<(f64, u64)> = cf
        .jumps(lo, hi)?
        .iter()
        .map(|j| (j.lambda, j.before))
        .collect();
    points.push((hi, cf.count(hi)?));
    Ok(points
        .into_iter()
        .filter(|&(l, n)| l > 0.0 && n as f64 <= slope * l * (1.0 + 1e-12))
        .map(|p| p.0)
        .fold(None, |acc: Option<f64>, l| {
            Some(acc.map_or(l, |a| a.max(l)))
        }))
}

/// One row of a counting-bound report. Positive margins mean the bound holds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CountRow {
    pub lambda: f64,
    pub count: u64,
    pub bound: f64,
    pub margin: f64,
}

/// Write rows as CSV with header `lambda,count,bound,margin`.
pub fn write_count_rows<W: std::io::Write>(rows: &[CountRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Length;
    use crate::spectra::{box_spectrum, interval_spectrum, sphere2_spectrum, BoundaryCondition::*};
    use std::f64::consts::PI;

    fn sphere(cutoff: f64) -> CountingFunction {
        CountingFunction::from_stream(sphere2_spectrum(cutoff).unwrap(), DomainMeta::sphere2())
    }

    #[test]
    fn count_examples() {
        assert_eq!(sphere(10.0).count(6.0).unwrap(), 4);
        let i = interval_spectrum(1.0, Dirichlet, 50.0).unwrap();
        assert_eq!(count(&i, PI * PI).unwrap(), 0);
        let sq = box_spectrum(&[Length::from(10.0), Length::from(10.0)], Neumann, 2.0).unwrap();
        assert_eq!(count(&sq, 1.0).unwrap(), 13);
        assert!(matches!(count(&sq, 3.0), Err(Error::Range(_))));
    }

    #[test]
    fn product_count_examples() {
        let a: Length = "pi/24".parse().unwrap();
        let s1 = interval_spectrum(a, Dirichlet, 600.0).unwrap();
        assert_eq!(product_count(&s1, &sphere(600.0), 600.0).unwrap(), 25);
        assert_eq!(product_count(&s1, &sphere(600.0), 500.0).unwrap(), 0);
    }

    #[test]
    fn weyl_and_two_term() {
        let m = DomainMeta::sphere2();
        assert!((weyl_leading(&m, 1.0) - 1.0).abs() < 1e-15);
        let sq = DomainMeta::boxed(&[10.0.into(), 10.0.into()], Neumann).unwrap();
        let b = two_term_bound(&sq, 20.0, 1.0, Side::Upper);
        assert!((b - (100.0 / (4.0 * PI) + 20.0)).abs() < 1e-12);
        assert_eq!(two_term_bound(&sq, 20.0, 0.0, Side::Upper), 0.0);
        let t = DomainMeta::unit_triangle(Neumann);
        let b = two_term_bound(&t, 30.0, 4.0, Side::Upper);
        assert!((b - (3f64.sqrt() * 4.0 / (16.0 * PI) + 60.0)).abs() < 1e-12);
    }

    #[test]
    fn jumps_of_sphere() {
        let j = jump_points(&sphere2_spectrum(7.0).unwrap());
        let got: Vec<_> = j.iter().map(|j| (j.lambda, j.before, j.after)).collect();
        assert_eq!(got, [(0.0, 0, 1), (2.0, 1, 4), (6.0, 4, 9)]);
        let i = interval_spectrum(1.0, Dirichlet, 50.0).unwrap();
        assert_eq!(jump_points(&i).len(), 2);
    }

    #[test]
    fn triangle_right_limit() {
        let t = CountingFunction::triangle_neumann();
        let first = 16.0 * PI * PI / 9.0;
        let s = triangle_neumann_spectrum(first * 1.5).unwrap();
        let v = s.levels()[1].value;
        assert_eq!(t.count(v).unwrap(), 1);
        assert_eq!(t.count_right(v).unwrap(), 3);
    }

    #[test]
    fn seeley_sphere_lower_at_most_one() {
        let e = estimate_seeley_constant(&sphere(1e4), (0.0, 1e4), Side::Lower).unwrap();
        assert!(e.value <= 1.0, "{e:?}");
        assert!(e.top.len() <= 5);
    }

    #[test]
    fn sphere_onset_is_six() {
        let slope = crate::constants::c_d(3) * PI * 4.0 * PI;
        let onset = weyl_onset(&sphere(100.0), slope, (0.0, 100.0)).unwrap();
        assert_eq!(onset, Some(6.0));
    }

    #[test]
    fn seeley_needs_jumps() {
        let i = interval_spectrum(1.0, Dirichlet, 5.0).unwrap();
        let cf =
            CountingFunction::from_stream(i, DomainMeta::interval(&1.0.into(), Dirichlet).unwrap());
        assert!(matches!(
            estimate_seeley_constant(&cf, (0.0, 5.0), Side::Upper),
            Err(Error::UndefinedEstimate(_))
        ));
    }
}
