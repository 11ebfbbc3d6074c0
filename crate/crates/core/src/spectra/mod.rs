//! Exact spectra of model domains (intervals, boxes, the equilateral triangle, the round
//! two-sphere) and their products.

mod generators;
pub mod io;
mod triangle;

pub use generators::{
    box_spectrum, interval_spectrum, product_spectrum, sphere2_spectrum, tabulated_spectrum,
};
pub use triangle::{triangle_neumann_counting, triangle_neumann_spectrum, TRIANGLE_UNIT};

use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};
use crate::exact::{Length, PiRational};

/// Relative tolerance used to merge coinciding eigenvalues of inexact streams.
pub const MERGE_RTOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
    /// Closed manifold: no boundary, spectrum starts at 0.
    Closed,
}

impl std::str::FromStr for BoundaryCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dirichlet" | "d" => Ok(Self::Dirichlet),
            "neumann" | "n" => Ok(Self::Neumann),
            "closed" => Ok(Self::Closed),
            _ => Err(Error::Config(format!("unknown boundary condition {s:?}"))),
        }
    }
}

/// Geometric data consumed by the Weyl and Polya bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainMeta {
    pub dimension: u32,
    pub volume: f64,
    pub surface_area: Option<f64>,
    pub bc: BoundaryCondition,
    /// Volume as `q * pi^p`, when known exactly. Enables exact Polya tie-breaks.
    pub exact_volume: Option<PiRational>,
}

impl DomainMeta {
    pub fn new(dimension: u32, volume: f64, bc: BoundaryCondition) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::Domain("dimension must be at least 1".into()));
        }
        ensure_positive("volume", volume)?;
        Ok(Self {
            dimension,
            volume,
            surface_area: None,
            bc,
            exact_volume: None,
        })
    }

    pub fn with_surface_area(mut self, area: f64) -> Result<Self> {
        ensure_positive("surface area", area)?;
        self.surface_area = Some(area);
        Ok(self)
    }

    pub fn with_exact_volume(mut self, volume: PiRational) -> Result<Self> {
        if !volume.is_positive() {
            return Err(Error::Domain("exact volume must be positive".into()));
        }
        let rel = (volume.to_f64() - self.volume).abs() / self.volume;
        if rel > 1e-12 {
            return Err(Error::Validation(format!(
                "exact volume {volume} disagrees with float volume {}",
                self.volume
            )));
        }
        self.exact_volume = Some(volume);
        Ok(self)
    }

    pub fn interval(a: &Length, bc: BoundaryCondition) -> Result<Self> {
        Self::boxed(std::slice::from_ref(a), bc)
    }

    /// Axis-parallel box with the given side lengths.
    pub fn boxed(sides: &[Length], bc: BoundaryCondition) -> Result<Self> {
        if sides.is_empty() {
            return Err(Error::Domain("box needs at least one side".into()));
        }
        if bc == BoundaryCondition::Closed {
            return Err(Error::Domain(
                "a box has a boundary; use dirichlet or neumann".into(),
            ));
        }
        for s in sides {
            ensure_positive("side length", s.value)?;
        }
        let volume: f64 = sides.iter().map(|s| s.value).product();
        let area: f64 = (0..sides.len())
            .map(|i| {
                2.0 * sides
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, s)| s.value)
                    .product::<f64>()
            })
            .sum();
        let mut meta = Self::new(sides.len() as u32, volume, bc)?.with_surface_area(area)?;
        if sides.iter().all(|s| s.exact.is_some()) {
            let v = sides.iter().fold(PiRational::one(), |acc, s| {
                acc.mul(s.exact.as_ref().unwrap())
            });
            meta.exact_volume = Some(v);
        }
        Ok(meta)
    }

    /// Round unit two-sphere, area `4 pi`.
    pub fn sphere2() -> Self {
        Self {
            dimension: 2,
            volume: 4.0 * std::f64::consts::PI,
            surface_area: None,
            bc: BoundaryCondition::Closed,
            exact_volume: Some(PiRational::new(4, 1, 1)),
        }
    }

    /// Equilateral triangle with unit side.
    pub fn unit_triangle(bc: BoundaryCondition) -> Self {
        Self {
            dimension: 2,
            volume: 3f64.sqrt() / 4.0,
            surface_area: Some(3.0),
            bc,
            exact_volume: None,
        }
    }

    /// Boundary measure, with closed manifolds reporting zero.
    pub fn boundary_measure(&self) -> Option<f64> {
        match self.bc {
            BoundaryCondition::Closed => Some(0.0),
            _ => self.surface_area,
        }
    }

    /// Metadata of the Riemannian product of two factors.
    pub fn product(a: &Self, b: &Self) -> Result<Self> {
        use BoundaryCondition::*;
        let bc = match (a.bc, b.bc) {
            (Closed, Closed) => Closed,
            (Dirichlet, Neumann) | (Neumann, Dirichlet) => {
                return Err(Error::Config(
                    "mixed Dirichlet/Neumann products are not supported".into(),
                ))
            }
            (Dirichlet, _) | (_, Dirichlet) => Dirichlet,
            _ => Neumann,
        };
        let mut meta = Self::new(a.dimension + b.dimension, a.volume * b.volume, bc)?;
        if let (Some(da), Some(db)) = (a.boundary_measure(), b.boundary_measure()) {
            let area = da * b.volume + a.volume * db;
            if area > 0.0 {
                meta.surface_area = Some(area);
            }
        }
        if let (Some(va), Some(vb)) = (&a.exact_volume, &b.exact_volume) {
            meta.exact_volume = Some(va.mul(vb));
        }
        Ok(meta)
    }
}

/// One distinct eigenvalue with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub value: f64,
    pub multiplicity: u64,
}

/// Exact form of a stream: level `i` equals `units[i] * scale`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactLevels {
    pub scale: PiRational,
    pub units: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IndexOrigin {
    /// Spectrum starts with the zero mode at index 0.
    Zero,
    /// Spectrum starts with a positive eigenvalue at index 1.
    One,
}

/// Increasing eigenvalues strictly below a cutoff, with multiplicities.
///
/// Immutable once built. Every eigenvalue of the generating model below `cutoff` is
/// present.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenvalueStream {
    levels: Vec<Level>,
    cumulative: Vec<u64>,
    cutoff: f64,
    exact: Option<ExactLevels>,
}

impl EigenvalueStream {
    pub(crate) fn from_parts(
        levels: Vec<Level>,
        cutoff: f64,
        exact: Option<ExactLevels>,
    ) -> Result<Self> {
        ensure_positive("cutoff", cutoff)?;
        for w in levels.windows(2) {
            if !(w[0].value < w[1].value) {
                return Err(Error::Validation(format!(
                    "values must be strictly increasing: {} then {}",
                    w[0].value, w[1].value
                )));
            }
        }
        for l in &levels {
            if !(l.value.is_finite() && l.value >= 0.0) {
                return Err(Error::Validation(format!("invalid eigenvalue {}", l.value)));
            }
            if l.multiplicity == 0 {
                return Err(Error::Validation("multiplicity must be at least 1".into()));
            }
            if l.value >= cutoff {
                return Err(Error::Validation(format!(
                    "eigenvalue {} is not below cutoff {cutoff}",
                    l.value
                )));
            }
        }
        if let Some(e) = &exact {
            debug_assert_eq!(e.units.len(), levels.len());
        }
        let mut total = 0u64;
        let cumulative = levels
            .iter()
            .map(|l| {
                total += l.multiplicity;
                total
            })
            .collect();
        Ok(Self {
            levels,
            cumulative,
            cutoff,
            exact,
        })
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn exact(&self) -> Option<&ExactLevels> {
        self.exact.as_ref()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn index_origin(&self) -> IndexOrigin {
        match self.levels.first() {
            Some(l) if l.value == 0.0 => IndexOrigin::Zero,
            _ => IndexOrigin::One,
        }
    }

    pub fn has_zero_mode(&self) -> bool {
        self.index_origin() == IndexOrigin::Zero
    }

    /// Total number of eigenvalues, counted with multiplicity.
    pub fn total(&self) -> u64 {
        self.cumulative.last().copied().unwrap_or(0)
    }

    /// Number of eigenvalues `< lambda`. The caller guarantees `lambda <= cutoff`.
    pub(crate) fn count_below(&self, lambda: f64) -> u64 {
        let i = self.levels.partition_point(|l| l.value < lambda);
        if i == 0 {
            0
        } else {
            self.cumulative[i - 1]
        }
    }

    /// Number of eigenvalues `<= lambda`.
    pub(crate) fn count_at_most(&self, lambda: f64) -> u64 {
        let i = self.levels.partition_point(|l| l.value <= lambda);
        if i == 0 {
            0
        } else {
            self.cumulative[i - 1]
        }
    }

    /// Level index holding the eigenvalue at flattened position `pos` (0-based).
    pub(crate) fn level_of_position(&self, pos: u64) -> Option<usize> {
        if pos >= self.total() {
            return None;
        }
        Some(self.cumulative.partition_point(|&c| c <= pos))
    }

    /// Eigenvalue at flattened position `pos` (0-based, repeated per multiplicity).
    pub fn value_at_position(&self, pos: u64) -> Option<f64> {
        self.level_of_position(pos).map(|i| self.levels[i].value)
    }

    /// Flattened eigenvalues, each repeated by multiplicity.
    pub fn flatten(&self) -> impl Iterator<Item = f64> + '_ {
        self.levels
            .iter()
            .flat_map(|l| std::iter::repeat_n(l.value, l.multiplicity as usize))
    }

    /// The same spectrum restricted to values below a smaller cutoff.
    pub fn truncate(&self, cutoff: f64) -> Result<Self> {
        ensure_positive("cutoff", cutoff)?;
        if cutoff > self.cutoff {
            return Err(Error::Range(format!(
                "cannot extend stream with cutoff {} to {cutoff}",
                self.cutoff
            )));
        }
        let n = self.levels.partition_point(|l| l.value < cutoff);
        let exact = self.exact.as_ref().map(|e| ExactLevels {
            scale: e.scale.clone(),
            units: e.units[..n].to_vec(),
        });
        Self::from_parts(self.levels[..n].to_vec(), cutoff, exact)
    }

    /// Multiset union of two spectra: the spectrum of the disjoint union of two domains.
    pub fn disjoint_union(&self, other: &Self) -> Result<Self> {
        let cutoff = self.cutoff.min(other.cutoff);
        let a = self.truncate(cutoff)?;
        let b = other.truncate(cutoff)?;
        if let (Some(ea), Some(eb)) = (&a.exact, &b.exact) {
            if let Some(unit) = ea.scale.common_unit(&eb.scale) {
                let fa = ea
                    .scale
                    .multiple_of(&unit)
                    .expect("common unit divides scale");
                let fb = eb
                    .scale
                    .multiple_of(&unit)
                    .expect("common unit divides scale");
                let pairs = ea
                    .units
                    .iter()
                    .zip(&a.levels)
                    .map(|(u, l)| (u * fa, l.multiplicity))
                    .chain(
                        eb.units
                            .iter()
                            .zip(&b.levels)
                            .map(|(u, l)| (u * fb, l.multiplicity)),
                    )
                    .collect();
                return exact_stream(pairs, unit, cutoff);
            }
        }
        let pairs = a
            .levels
            .iter()
            .chain(&b.levels)
            .map(|l| (l.value, l.multiplicity))
            .collect();
        float_stream(pairs, cutoff)
    }
}

/// Call `build` with growing cutoffs, starting at `start`, until the stream holds at least
/// `need` eigenvalues, or until the cutoff overflows.
pub fn build_with_count(
    mut build: impl FnMut(f64) -> Result<EigenvalueStream>,
    need: u64,
    start: f64,
) -> Result<EigenvalueStream> {
    ensure_positive("start", start)?;
    let mut cutoff = start;
    let mut s = build(cutoff)?;
    while s.total() < need {
        cutoff *= 1.5;
        if !cutoff.is_finite() {
            return Err(Error::Range(format!("could not reach {need} eigenvalues")));
        }
        s = build(cutoff)?;
    }
    Ok(s)
}

/// Aggregate `(value, multiplicity)` pairs with relative tolerance [`MERGE_RTOL`].
pub(crate) fn float_stream(mut pairs: Vec<(f64, u64)>, cutoff: f64) -> Result<EigenvalueStream> {
    pairs.retain(|p| p.0 < cutoff);
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut levels: Vec<Level> = Vec::new();
    let mut anchor = f64::NAN;
    for (value, multiplicity) in pairs {
        match levels.last_mut() {
            Some(last) if (value - anchor).abs() <= MERGE_RTOL * anchor.abs() => {
                last.multiplicity += multiplicity;
            }
            _ => {
                anchor = value;
                levels.push(Level {
                    value,
                    multiplicity,
                });
            }
        }
    }
    EigenvalueStream::from_parts(levels, cutoff, None)
}

/// Aggregate `(units, multiplicity)` pairs exactly; level value is `units * scale`.
pub(crate) fn exact_stream(
    mut pairs: Vec<(u64, u64)>,
    scale: PiRational,
    cutoff: f64,
) -> Result<EigenvalueStream> {
    let unit = scale.to_f64();
    pairs.retain(|p| (p.0 as f64) * unit < cutoff);
    pairs.sort_unstable_by_key(|p| p.0);
    let mut levels: Vec<Level> = Vec::new();
    let mut units: Vec<u64> = Vec::new();
    for (u, multiplicity) in pairs {
        if units.last() == Some(&u) {
            levels.last_mut().unwrap().multiplicity += multiplicity;
        } else {
            units.push(u);
            levels.push(Level {
                value: u as f64 * unit,
                multiplicity,
            });
        }
    }
    EigenvalueStream::from_parts(levels, cutoff, Some(ExactLevels { scale, units }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_merge_respects_tolerance() {
        let s = float_stream(
            vec![(1.0, 1), (1.0 + 1e-14, 2), (2.0, 1), (2.0 + 1e-6, 1)],
            10.0,
        )
        .unwrap();
        assert_eq!(s.levels().len(), 3);
        assert_eq!(s.levels()[0].multiplicity, 3);
        assert_eq!(s.total(), 5);
    }

    #[test]
    fn positions_follow_multiplicity() {
        let s = float_stream(vec![(0.0, 1), (2.0, 3), (6.0, 5)], 7.0).unwrap();
        assert_eq!(s.value_at_position(0), Some(0.0));
        assert_eq!(s.value_at_position(1), Some(2.0));
        assert_eq!(s.value_at_position(3), Some(2.0));
        assert_eq!(s.value_at_position(4), Some(6.0));
        assert_eq!(s.value_at_position(9), None);
        assert_eq!(s.flatten().count(), 9);
    }

    #[test]
    fn product_meta_combines_boundary() {
        let a: Length = "pi/24".parse().unwrap();
        let i = DomainMeta::interval(&a, BoundaryCondition::Dirichlet).unwrap();
        let m = DomainMeta::product(&i, &DomainMeta::sphere2()).unwrap();
        assert_eq!(m.dimension, 3);
        assert_eq!(m.bc, BoundaryCondition::Dirichlet);
        assert_eq!(m.exact_volume, Some(PiRational::new(1, 6, 2)));
        assert!((m.surface_area.unwrap() - 8.0 * std::f64::consts::PI).abs() < 1e-12);
        assert!(DomainMeta::product(
            &i,
            &DomainMeta::interval(&a, BoundaryCondition::Neumann).unwrap()
        )
        .is_err());
    }
}
