use std::f64::consts::PI;

use super::{exact_stream, float_stream, BoundaryCondition, DomainMeta, EigenvalueStream, Level};
use crate::error::{ensure_positive, Error, Result};
use crate::exact::{Length, PiRational};

/// Spectrum of the interval `(0, a)`: values `l^2 pi^2 / a^2`, `l >= 1` (Dirichlet) or
/// `l >= 0` (Neumann).
pub fn interval_spectrum(
    a: impl Into<Length>,
    bc: BoundaryCondition,
    cutoff: f64,
) -> Result<EigenvalueStream> {
    box_spectrum(&[a.into()], bc, cutoff)
}

/// Spectrum of the box `prod (0, side_i)`: values `sum pi^2 m_i^2 / side_i^2`.
pub fn box_spectrum(
    sides: &[Length],
    bc: BoundaryCondition,
    cutoff: f64,
) -> Result<EigenvalueStream> {
    if sides.is_empty() {
        return Err(Error::Domain("box needs at least one side".into()));
    }
    ensure_positive("cutoff", cutoff)?;
    for s in sides {
        ensure_positive("side length", s.value)?;
    }
    let start: u64 = match bc {
        BoundaryCondition::Dirichlet => 1,
        BoundaryCondition::Neumann => 0,
        BoundaryCondition::Closed => {
            return Err(Error::Domain(
                "boxes take dirichlet or neumann conditions".into(),
            ))
        }
    };
    let axis_units: Vec<f64> = sides
        .iter()
        .map(|s| PI * PI / (s.value * s.value))
        .collect();
    let max_index: Vec<u64> = sides
        .iter()
        .map(|s| (s.value * cutoff.sqrt() / PI).floor() as u64 + 1)
        .collect();

    if let Some((scale, factors)) = exact_axis_units(sides) {
        let unit = scale.to_f64();
        let mut pairs = Vec::new();
        enumerate(&max_index, start, &mut vec![0; sides.len()], 0, &mut |m| {
            let u: u64 = m.iter().zip(&factors).map(|(&mi, &f)| mi * mi * f).sum();
            if (u as f64) * unit < cutoff {
                pairs.push((u, 1));
                true
            } else {
                false
            }
        });
        return exact_stream(pairs, scale, cutoff);
    }

    let mut pairs = Vec::new();
    enumerate(&max_index, start, &mut vec![0; sides.len()], 0, &mut |m| {
        let v: f64 = m
            .iter()
            .zip(&axis_units)
            .map(|(&mi, &u)| (mi * mi) as f64 * u)
            .sum();
        if v < cutoff {
            pairs.push((v, 1));
            true
        } else {
            false
        }
    });
    float_stream(pairs, cutoff)
}

// Common exact unit of the axis eigenvalue units `pi^2 / side^2`, and each axis's integer
// multiple of it.
fn exact_axis_units(sides: &[Length]) -> Option<(PiRational, Vec<u64>)> {
    let pi2 = PiRational::new(1, 1, 2);
    let units: Vec<PiRational> = sides
        .iter()
        .map(|s| s.exact.as_ref().map(|q| pi2.div(&q.pow(2))))
        .collect::<Option<_>>()?;
    let mut common = units[0].clone();
    for u in &units[1..] {
        common = common.common_unit(u)?;
    }
    let factors = units
        .iter()
        .map(|u| u.multiple_of(&common))
        .collect::<Option<Vec<_>>>()?;
    Some((common, factors))
}

// Visits multi-indices in lexicographic order. `visit` returns false when the current index
// is already above the cutoff; since values grow with the last coordinate, the innermost
// loop stops there.
fn enumerate(
    max_index: &[u64],
    start: u64,
    current: &mut Vec<u64>,
    axis: usize,
    visit: &mut dyn FnMut(&[u64]) -> bool,
) {
    for m in start..=max_index[axis] {
        current[axis] = m;
        if axis + 1 == max_index.len() {
            if !visit(current) {
                break;
            }
        } else {
            enumerate(max_index, start, current, axis + 1, visit);
        }
    }
}

/// Spectrum of the round unit two-sphere: `k(k+1)` with multiplicity `2k+1`.
pub fn sphere2_spectrum(cutoff: f64) -> Result<EigenvalueStream> {
    ensure_positive("cutoff", cutoff)?;
    let mut pairs = Vec::new();
    let mut k = 0u64;
    while ((k * (k + 1)) as f64) < cutoff {
        pairs.push((k * (k + 1), 2 * k + 1));
        k += 1;
    }
    exact_stream(pairs, PiRational::one(), cutoff)
}

/// Spectrum of a product: all pairwise sums `v + w < cutoff`, multiplicities multiplied.
///
/// Both inputs must cover `[0, cutoff)`; scaling the first factor is done by the caller
/// through the generator parameters.
pub fn product_spectrum(
    s1: &EigenvalueStream,
    s2: &EigenvalueStream,
    cutoff: f64,
) -> Result<EigenvalueStream> {
    ensure_positive("cutoff", cutoff)?;
    if s1.cutoff() < cutoff || s2.cutoff() < cutoff {
        return Err(Error::Precondition(format!(
            "factor cutoffs ({}, {}) must be at least the product cutoff {cutoff}",
            s1.cutoff(),
            s2.cutoff()
        )));
    }
    if let (Some(e1), Some(e2)) = (s1.exact(), s2.exact()) {
        if let Some(unit) = e1.scale.common_unit(&e2.scale) {
            let f1 = e1
                .scale
                .multiple_of(&unit)
                .expect("common unit divides scale");
            let f2 = e2
                .scale
                .multiple_of(&unit)
                .expect("common unit divides scale");
            let unit_f = unit.to_f64();
            let mut pairs = Vec::new();
            for (u1, l1) in e1.units.iter().zip(s1.levels()) {
                if l1.value >= cutoff {
                    break;
                }
                for (u2, l2) in e2.units.iter().zip(s2.levels()) {
                    let u = u1 * f1 + u2 * f2;
                    if (u as f64) * unit_f >= cutoff {
                        break;
                    }
                    pairs.push((u, l1.multiplicity * l2.multiplicity));
                }
            }
            return exact_stream(pairs, unit, cutoff);
        }
    }
    let mut pairs = Vec::new();
    for l1 in s1.levels() {
        if l1.value >= cutoff {
            break;
        }
        for l2 in s2.levels() {
            let v = l1.value + l2.value;
            if v >= cutoff {
                break;
            }
            pairs.push((v, l1.multiplicity * l2.multiplicity));
        }
    }
    float_stream(pairs, cutoff)
}

/// Validated stream from externally computed `(value, multiplicity)` entries.
///
/// Entries must be strictly increasing (coinciding values must already be aggregated) and
/// nonnegative. Entries at or above `cutoff` are dropped. The first value must be `0` for
/// Neumann and closed spectra and positive for Dirichlet spectra.
pub fn tabulated_spectrum(
    entries: &[(f64, u64)],
    meta: &DomainMeta,
    cutoff: f64,
) -> Result<EigenvalueStream> {
    ensure_positive("cutoff", cutoff)?;
    for w in entries.windows(2) {
        if !(w[0].0 < w[1].0) {
            return Err(Error::Validation(format!(
                "entries must be strictly increasing: {} then {}",
                w[0].0, w[1].0
            )));
        }
    }
    if let Some(bad) = entries.iter().find(|e| !(e.0.is_finite() && e.0 >= 0.0)) {
        return Err(Error::Validation(format!("invalid eigenvalue {}", bad.0)));
    }
    let levels: Vec<Level> = entries
        .iter()
        .take_while(|e| e.0 < cutoff)
        .map(|&(value, multiplicity)| Level {
            value,
            multiplicity,
        })
        .collect();
    match (meta.bc, levels.first()) {
        (BoundaryCondition::Dirichlet, Some(l)) if l.value == 0.0 => {
            return Err(Error::Validation(
                "Dirichlet spectra start with a positive eigenvalue".into(),
            ))
        }
        (BoundaryCondition::Neumann | BoundaryCondition::Closed, first)
            if first.is_none_or(|l| l.value != 0.0) =>
        {
            return Err(Error::Validation(
                "Neumann and closed spectra start with the zero mode".into(),
            ))
        }
        _ => {}
    }
    EigenvalueStream::from_parts(levels, cutoff, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use BoundaryCondition::*;

    fn values(s: &EigenvalueStream) -> Vec<f64> {
        s.levels().iter().map(|l| l.value).collect()
    }

    fn mults(s: &EigenvalueStream) -> Vec<u64> {
        s.levels().iter().map(|l| l.multiplicity).collect()
    }

    #[test]
    fn interval_examples() {
        let s = interval_spectrum(1.0, Dirichlet, 50.0).unwrap();
        assert_eq!(values(&s), vec![PI * PI, 4.0 * PI * PI]);

        let s = interval_spectrum(1.0, Neumann, 1.0).unwrap();
        assert_eq!(values(&s), vec![0.0]);

        let a: Length = "pi/24".parse().unwrap();
        let s = interval_spectrum(a, Dirichlet, 1e4).unwrap();
        assert!(s.is_exact());
        assert_eq!(values(&s), vec![576.0, 2304.0, 5184.0, 9216.0]);
        assert_eq!(s.exact().unwrap().scale, PiRational::integer(576));
    }

    #[test]
    fn interval_errors() {
        assert!(interval_spectrum(-1.0, Dirichlet, 1.0).is_err());
        assert!(interval_spectrum(1.0, Dirichlet, 0.0).is_err());
        assert!(interval_spectrum(1.0, Closed, 1.0).is_err());
        assert!(box_spectrum(&[], Dirichlet, 1.0).is_err());
    }

    #[test]
    fn box_examples() {
        let ten: Length = "10".parse().unwrap();
        let u = PI * PI / 100.0;
        let s = box_spectrum(&[ten.clone(), ten], Neumann, 5.0 * u + 1e-9).unwrap();
        assert!(s.is_exact());
        assert_eq!(mults(&s), vec![1, 2, 1, 2, 2]);
        let expected = [0.0, u, 2.0 * u, 4.0 * u, 5.0 * u];
        for (v, e) in values(&s).iter().zip(expected) {
            assert!((v - e).abs() <= 1e-15 * e.max(1.0));
        }

        let d1 = box_spectrum(&[1.0.into()], Dirichlet, 200.0).unwrap();
        assert_eq!(d1, interval_spectrum(1.0, Dirichlet, 200.0).unwrap());

        let sq = box_spectrum(&[1.0.into(), 1.0.into()], Dirichlet, 3.0 * PI * PI).unwrap();
        assert_eq!(values(&sq), vec![2.0 * PI * PI]);
        assert_eq!(mults(&sq), vec![1]);
    }

    #[test]
    fn sphere_examples() {
        let s = sphere2_spectrum(6.0).unwrap();
        assert_eq!(values(&s), vec![0.0, 2.0]);
        assert_eq!(mults(&s), vec![1, 3]);
        assert_eq!(values(&sphere2_spectrum(0.5).unwrap()), vec![0.0]);
        assert_eq!(sphere2_spectrum(43.0).unwrap().total(), 49);
    }

    #[test]
    fn product_examples() {
        let a: Length = "pi/24".parse().unwrap();
        let i = interval_spectrum(a, Dirichlet, 600.0).unwrap();
        let p = product_spectrum(&i, &sphere2_spectrum(600.0).unwrap(), 600.0).unwrap();
        assert!(p.is_exact());
        assert_eq!(values(&p), vec![576.0, 578.0, 582.0, 588.0, 596.0]);
        assert_eq!(mults(&p), vec![1, 3, 5, 7, 9]);

        let zero = float_stream(vec![(0.0, 1)], 100.0).unwrap();
        let s2 = sphere2_spectrum(100.0).unwrap();
        let p = product_spectrum(&zero, &s2, 50.0).unwrap();
        assert_eq!(p.levels(), s2.truncate(50.0).unwrap().levels());

        let lam = 9.0 * PI * PI;
        let i1 = interval_spectrum(1.0, Dirichlet, lam).unwrap();
        let p = product_spectrum(&i1, &i1, lam).unwrap();
        assert_eq!(mults(&p), vec![1, 2, 1]);
        let v = values(&p);
        for (x, m) in v.iter().zip([2.0, 5.0, 8.0]) {
            assert!((x / (PI * PI) - m).abs() < 1e-12);
        }
        assert!(!p.has_zero_mode());
    }

    #[test]
    fn product_requires_cover() {
        let s = sphere2_spectrum(10.0).unwrap();
        assert!(matches!(
            product_spectrum(&s, &s, 20.0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn tabulated_examples() {
        let meta = DomainMeta::sphere2();
        let t = tabulated_spectrum(&[(0.0, 1), (2.0, 3)], &meta, 6.0).unwrap();
        assert_eq!(t.levels(), sphere2_spectrum(6.0).unwrap().levels());

        assert!(matches!(
            tabulated_spectrum(&[(1.0, 1), (1.0, 1)], &meta, 6.0),
            Err(Error::Validation(_))
        ));
        assert!(tabulated_spectrum(&[(-1.0, 1)], &meta, 6.0).is_err());

        let dir = DomainMeta::new(2, 1.0, Dirichlet).unwrap();
        assert!(tabulated_spectrum(&[], &dir, 1.0).unwrap().is_empty());
        assert!(tabulated_spectrum(&[], &meta, 1.0).is_err());
    }
}
