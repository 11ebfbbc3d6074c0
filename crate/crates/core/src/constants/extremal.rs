//! The one-dimensional extremal constants
//!
//! ```text
//! H1(d) = inf_{1 <= mu < d-1}    [ I(mu) - sum_{0 < l^2 < mu} (mu - l^2)^{d/2} ] / mu^{d/2}
//! H2(d) = inf_{1 <= mu <= 9(d-1)} [ sum_{0 <= l^2 < mu} (mu - l^2)^{d/2} - I(mu) ] / mu^{d/2}
//! ```
//!
//! with `I(mu) = int_0^{sqrt mu} (mu - x^2)^{d/2} dx` in closed form. The objectives are
//! smooth between consecutive squares and kink at `mu = l^2`, so each smooth piece gets a
//! grid pass followed by golden-section refinement around its best grid point.

use rayon::prelude::*;
use serde::Serialize;

use super::fd_integral;
use crate::error::{Error, Result};

/// Grid step of the global pass.
pub const DEFAULT_STEP: f64 = 1e-4;

/// Distance from `d - 1` at which the open right end of the `H1` range is evaluated.
const H1_RIGHT_GAP: f64 = 1e-9;

const GOLDEN_TOL: f64 = 1e-12;

#[derive(Clone, Debug, Serialize)]
pub struct ExtremalConstant {
    pub value: f64,
    pub argmin_mu: f64,
    pub error_estimate: f64,
    pub grid_step: f64,
}

fn integral(d: u32, mu: f64) -> f64 {
    fd_integral(d, std::f64::consts::PI, mu)
}

/// `sum_{l >= first, l^2 < mu} (mu - l^2)^{d/2}`.
fn lattice_sum(d: u32, mu: f64, first: u64) -> f64 {
    let h = d as f64 / 2.0;
    let mut s = 0.0;
    let mut l = first;
    while ((l * l) as f64) < mu {
        s += (mu - (l * l) as f64).powf(h);
        l += 1;
    }
    s
}

/// Objective whose infimum over `[1, d-1)` is `H1(d)`.
pub fn h1_objective(d: u32, mu: f64) -> f64 {
    (integral(d, mu) - lattice_sum(d, mu, 1)) / mu.powf(d as f64 / 2.0)
}

/// Objective whose infimum over `[1, 9(d-1)]` is `H2(d)`.
pub fn h2_objective(d: u32, mu: f64) -> f64 {
    (lattice_sum(d, mu, 0) - integral(d, mu)) / mu.powf(d as f64 / 2.0)
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a) > GOLDEN_TOL * (1.0 + a.abs()) {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = (a + b) / 2.0;
    let fx = f(x);
    (x, fx, (f(a) - fx).abs().max((f(b) - fx).abs()))
}

// Minimize `f` on `[lo, hi]`, treating each interval between consecutive squares as a
// separate smooth piece.
fn piecewise_min(f: impl Fn(f64) -> f64 + Sync, lo: f64, hi: f64, step: f64) -> ExtremalConstant {
    let mut breaks = vec![lo];
    let mut l = 1u64;
    while ((l * l) as f64) < hi {
        let sq = (l * l) as f64;
        if sq > lo {
            breaks.push(sq);
        }
        l += 1;
    }
    breaks.push(hi);

    let pieces: Vec<(f64, f64)> = breaks.windows(2).map(|w| (w[0], w[1])).collect();
    let best = pieces
        .par_iter()
        .map(|&(p0, p1)| {
            let n = ((p1 - p0) / step).ceil() as usize;
            let mut arg = p0;
            let mut val = f(p0);
            for i in 1..=n {
                let x = (p0 + i as f64 * step).min(p1);
                let v = f(x);
                if v < val {
                    val = v;
                    arg = x;
                }
            }
            let (a, b) = ((arg - step).max(p0), (arg + step).min(p1));
            let (x, fx, err) = golden_section(&f, a, b);
            // Near a kink the one-sided limit is what matters: the endpoints stay
            // candidates.
            let mut cands = vec![(x, fx, err), (arg, val, 0.0)];
            cands.push((p0, f(p0), 0.0));
            cands.push((p1, f(p1), 0.0));
            cands
                .into_iter()
                .min_by(|u, v| u.1.total_cmp(&v.1))
                .unwrap()
        })
        .min_by(|u, v| u.1.total_cmp(&v.1))
        .expect("at least one piece");

    ExtremalConstant {
        value: best.1,
        argmin_mu: best.0,
        error_estimate: best.2 + 1e-14 * best.1.abs().max(1.0),
        grid_step: step,
    }
}

fn require_d3(d: u32) -> Result<()> {
    if d < 3 {
        return Err(Error::Case(format!("H1 and H2 need d >= 3, got {d}")));
    }
    Ok(())
}

fn check_step(step: f64) -> Result<()> {
    if !(step > 0.0 && step <= 0.1) {
        return Err(Error::Domain(format!(
            "grid step must lie in (0, 0.1], got {step}"
        )));
    }
    Ok(())
}

pub fn h1(d: u32) -> Result<ExtremalConstant> {
    h1_with_step(d, DEFAULT_STEP)
}

pub fn h2(d: u32) -> Result<ExtremalConstant> {
    h2_with_step(d, DEFAULT_STEP)
}

/// `H1(d)`. The open right end `d - 1` is approached at `d - 1 - 1e-9`.
pub fn h1_with_step(d: u32, step: f64) -> Result<ExtremalConstant> {
    require_d3(d)?;
    check_step(step)?;
    let hi = d as f64 - 1.0 - H1_RIGHT_GAP;
    let mut out = piecewise_min(|mu| h1_objective(d, mu), 1.0, hi, step);
    // The value at the open end is a limit; account for the gap in the error.
    if (out.argmin_mu - hi).abs() < step {
        let slope = (h1_objective(d, hi) - h1_objective(d, hi - 1e-6)).abs() / 1e-6;
        out.error_estimate += slope * H1_RIGHT_GAP;
    }
    Ok(out)
}

pub fn h2_with_step(d: u32, step: f64) -> Result<ExtremalConstant> {
    require_d3(d)?;
    check_step(step)?;
    Ok(piecewise_min(
        |mu| h2_objective(d, mu),
        1.0,
        9.0 * (d as f64 - 1.0),
        step,
    ))
}
