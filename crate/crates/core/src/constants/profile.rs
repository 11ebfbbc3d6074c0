//! The profile `f_d(x) = (lambda - x^2 pi^2 / a^2)^{d/2}` and the one-dimensional sum
//! estimates used in the thin-product arguments.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{ensure_positive, Error, Result};

/// `f_d(x) = (lambda - x^2 pi^2 / a^2)^{d/2}` on `[0, a sqrt(lambda)/pi]`, zero beyond.
pub fn fd(d: u32, a: f64, lambda: f64, x: f64) -> f64 {
    let t = lambda - x * x * PI * PI / (a * a);
    if t <= 0.0 {
        0.0
    } else {
        t.powf(d as f64 / 2.0)
    }
}

/// Second derivative of [`fd`] inside its support:
/// `(d pi^2/a^2) t^{d/2-2} ((d-1) pi^2 x^2/a^2 - lambda)` with `t = lambda - x^2 pi^2/a^2`.
pub fn fd_second_derivative(d: u32, a: f64, lambda: f64, x: f64) -> f64 {
    let df = d as f64;
    let k = PI * PI / (a * a);
    let t = lambda - x * x * k;
    if t <= 0.0 {
        return 0.0;
    }
    df * k * t.powf(df / 2.0 - 2.0) * ((df - 1.0) * k * x * x - lambda)
}

/// Inflection point `sqrt(lambda/(d-1)) a/pi` of `f_d`: concave before, convex after.
pub fn fd_inflection(d: u32, a: f64, lambda: f64) -> Result<f64> {
    if d < 2 {
        return Err(Error::Case(format!("f_d has no inflection for d = {d}")));
    }
    ensure_positive("a", a)?;
    ensure_positive("lambda", lambda)?;
    Ok((lambda / (d as f64 - 1.0)).sqrt() * a / PI)
}

/// Both sides of the two one-dimensional sum estimates at `(a, lambda)`.
#[derive(Clone, Debug, Serialize)]
pub struct SumEstimates {
    /// `floor(a sqrt(lambda) / pi)`.
    pub m: u64,
    /// `sum_{l=1}^{M} (lambda - l^2 pi^2/a^2)`.
    pub sum_from_one: f64,
    /// `2 a lambda^{3/2}/(3 pi) - lambda/8 - sqrt(lambda) pi/(12 a)`.
    pub upper_bound: f64,
    /// `sum_{l=0}^{M} (lambda - l^2 pi^2/a^2)`.
    pub sum_from_zero: f64,
    /// `2 a lambda^{3/2}/(3 pi) + lambda/12`.
    pub lower_bound: f64,
}

impl SumEstimates {
    pub fn upper_holds(&self) -> bool {
        self.sum_from_one <= self.upper_bound
    }

    pub fn lower_holds(&self) -> bool {
        self.sum_from_zero >= self.lower_bound
    }

    /// True when either inequality holds with relative slack below `rtol`.
    pub fn near_equality(&self, rtol: f64) -> bool {
        let scale = self.lower_bound.abs().max(1.0);
        (self.upper_bound - self.sum_from_one).abs() <= rtol * scale
            || (self.sum_from_zero - self.lower_bound).abs() <= rtol * scale
    }
}

/// Evaluate the sums and bounds. Requires `lambda >= pi^2/a^2`, i.e. `M >= 1`.
pub fn check_sum_estimates(a: f64, lambda: f64) -> Result<SumEstimates> {
    ensure_positive("a", a)?;
    ensure_positive("lambda", lambda)?;
    let k = PI * PI / (a * a);
    if lambda < k {
        return Err(Error::Hypothesis(format!(
            "need lambda >= pi^2/a^2 = {k}, got {lambda}"
        )));
    }
    let mut m = (a * lambda.sqrt() / PI).floor() as u64;
    // floor can land one too high or low when a sqrt(lambda)/pi is within rounding of an
    // integer; pin M by the defining inequality M^2 pi^2/a^2 <= lambda.
    while m > 1 && (m as f64).powi(2) * k > lambda {
        m -= 1;
    }
    while ((m + 1) as f64).powi(2) * k <= lambda {
        m += 1;
    }
    let mf = m as f64;
    let squares = mf * (mf + 1.0) * (2.0 * mf + 1.0) / 6.0;
    let sum_from_one = lambda * mf - k * squares;
    let lead = 2.0 * a * lambda.powf(1.5) / (3.0 * PI);
    Ok(SumEstimates {
        m,
        sum_from_one,
        upper_bound: lead - lambda / 8.0 - lambda.sqrt() * PI / (12.0 * a),
        sum_from_zero: lambda + sum_from_one,
        lower_bound: lead + lambda / 12.0,
    })
}
