//! Neumann spectrum of the equilateral triangle with unit side.
//!
//! Eigenvalues are `(16 pi^2 / 27) (m^2 + n^2 - mn)` over lattice points with `3 | (m+n)`.
//! The counting function is the weighted count
//!
//! ```text
//! N(lambda) = #{(m,n) not in P, 3|(m+n), q < Q} / 6 + #{(m,n) in P, q < Q} / 3 + 2/3
//! ```
//!
//! where `P` is the union of the lines `n = 2m`, `m = 2n`, `n = -m` and `Q` is `lambda`
//! in units of `16 pi^2 / 27`. Weights are accumulated in sixths so the total is an exact
//! rational; a non-integer total is an internal error.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use super::{exact_stream, EigenvalueStream};
use crate::error::{ensure_positive, Error, Result};
use crate::exact::PiRational;

/// Eigenvalue unit `16 pi^2 / 27` as `(numerator, denominator, pi power)`.
pub const TRIANGLE_UNIT: (i64, i64, i32) = (16, 27, 2);

fn unit() -> PiRational {
    PiRational::new(TRIANGLE_UNIT.0, TRIANGLE_UNIT.1, TRIANGLE_UNIT.2)
}

fn on_special_lines(m: i64, n: i64) -> bool {
    n == 2 * m || m == 2 * n || n == -m
}

// Visits `(q, weight in sixths)` for every lattice point with `q * unit < lambda`.
fn for_each_point(lambda: f64, mut visit: impl FnMut(u64, u64)) {
    let unit_f = unit().to_f64();
    let bound = ((27.0 * lambda / (16.0 * PI * PI)).sqrt() * 2.0).ceil() as i64;
    for m in -bound..=bound {
        for n in -bound..=bound {
            if (m + n).rem_euclid(3) != 0 {
                continue;
            }
            let q = (m * m + n * n - m * n) as u64;
            if (q as f64) * unit_f >= lambda {
                continue;
            }
            let w = if on_special_lines(m, n) { 2 } else { 1 };
            visit(q, w);
        }
    }
}

/// Neumann counting function `#{k : mu_k(T) < lambda}` of the unit equilateral triangle.
pub fn triangle_neumann_counting(lambda: f64) -> Result<u64> {
    ensure_positive("lambda", lambda)?;
    let mut sixths: u64 = 4;
    for_each_point(lambda, |_, w| sixths += w);
    if !sixths.is_multiple_of(6) {
        return Err(Error::Internal(format!(
            "triangle count {sixths}/6 at lambda = {lambda} is not an integer"
        )));
    }
    Ok(sixths / 6)
}

/// Neumann spectrum of the unit equilateral triangle below `cutoff`, exact in units of
/// `16 pi^2 / 27`.
pub fn triangle_neumann_spectrum(cutoff: f64) -> Result<EigenvalueStream> {
    ensure_positive("cutoff", cutoff)?;
    let mut weights: BTreeMap<u64, u64> = BTreeMap::new();
    for_each_point(cutoff, |q, w| *weights.entry(q).or_default() += w);
    *weights.entry(0).or_default() += 4;
    let mut pairs = Vec::with_capacity(weights.len());
    for (q, w) in weights {
        if w % 6 != 0 {
            return Err(Error::Internal(format!(
                "triangle multiplicity {w}/6 at level {q} is not an integer"
            )));
        }
        pairs.push((q, w / 6));
    }
    exact_stream(pairs, unit(), cutoff)
}
