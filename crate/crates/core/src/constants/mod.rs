//! Closed-form constants: unit-ball volumes, Weyl constants `C_d`, Riesz-mean constants
//! `L_{gamma,d}`, the profile `f_d` and its integral, and the `A_d`/`B_d` constants of the
//! thin-product estimates in dimension `d >= 3`.

mod extremal;
mod profile;
mod threshold;

pub use extremal::{
    h1, h1_objective, h1_with_step, h2, h2_objective, h2_with_step, ExtremalConstant,
};
pub use profile::{check_sum_estimates, fd, fd_inflection, fd_second_derivative, SumEstimates};
pub use threshold::{threshold_a0, Branch, ThresholdCase, ThresholdRequest, ThresholdResult};

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exact::PiRational;

/// Gamma function. Exact product formulas at positive integers and half-integers, `libm`
/// elsewhere.
pub fn gamma(x: f64) -> f64 {
    let twice = 2.0 * x;
    if x > 0.0 && twice == twice.round() && twice <= 340.0 {
        let n = twice as u64;
        if n.is_multiple_of(2) {
            // (n/2 - 1)!
            (1..n / 2).map(|j| j as f64).product()
        } else {
            // Gamma(k + 1/2) = sqrt(pi) prod_{j=1}^{k} (j - 1/2)
            let k = (n - 1) / 2;
            PI.sqrt() * (1..=k).map(|j| j as f64 - 0.5).product::<f64>()
        }
    } else {
        libm::tgamma(x)
    }
}

/// `Gamma(x) / Gamma(y)`, stable for large arguments.
fn gamma_ratio(x: f64, y: f64) -> f64 {
    let (gx, gy) = (gamma(x), gamma(y));
    if gx.is_finite() && gy.is_finite() && gy != 0.0 {
        gx / gy
    } else {
        (libm::lgamma(x) - libm::lgamma(y)).exp()
    }
}

/// Volume of the unit ball in `R^d`.
pub fn omega_d(d: u32) -> f64 {
    let h = d as f64 / 2.0;
    PI.powf(h) / gamma(h + 1.0)
}

/// Weyl constant `C_d = omega_d / (2 pi)^d`.
pub fn c_d(d: u32) -> f64 {
    let h = d as f64 / 2.0;
    1.0 / ((4.0 * PI).powf(h) * gamma(h + 1.0))
}

/// Riesz-mean constant `L_{gamma,d} = Gamma(gamma+1) / ((4 pi)^{d/2} Gamma(gamma+1+d/2))`.
pub fn l_gamma_d(gamma_exp: f64, d: u32) -> f64 {
    let h = d as f64 / 2.0;
    // Written so that gamma = 0 reproduces `c_d` bit for bit.
    1.0 / ((4.0 * PI).powf(h) * gamma_ratio(gamma_exp + 1.0 + h, gamma_exp + 1.0))
}

/// `omega_d` as an exact `q * pi^p`.
pub fn omega_d_exact(d: u32) -> PiRational {
    let m = d / 2;
    if d.is_multiple_of(2) {
        // pi^m / m!
        let fact: BigInt = (1..=m as u64).map(BigInt::from).product();
        PiRational::from_parts(BigRational::new(BigInt::from(1), fact), m as i32)
    } else {
        // 2^{m+1} pi^m / (2m+1)!!
        let dfact: BigInt = (0..=m as u64).map(|j| BigInt::from(2 * j + 1)).product();
        let two_pow = num_traits::pow(BigInt::from(2), m as usize + 1);
        PiRational::from_parts(BigRational::new(two_pow, dfact), m as i32)
    }
}

/// `C_d` as an exact `q * pi^p`.
pub fn c_d_exact(d: u32) -> PiRational {
    let two_pi = PiRational::new(2, 1, 1);
    omega_d_exact(d).div(&two_pi.pow(d))
}

/// Weyl eigenvalue scale `4 pi^2 / (omega_d |Omega|)^{2/d}`: the Polya bound on the k-th
/// eigenvalue is this times `k^{2/d}`.
pub fn polya_weight(d: u32, volume: f64) -> f64 {
    4.0 * PI * PI / (omega_d(d) * volume).powf(2.0 / d as f64)
}

/// The Polya comparison raised to the power `d`: `(4 pi^2)^d / (omega_d |Omega|)^2`.
///
/// With this constant the Dirichlet inequality reads `lambda_k^d >= K k^2`, which needs no
/// fractional powers. For `(0, pi/24) x S^2` it is exactly 1296.
pub fn polya_power_constant(d: u32, volume: &PiRational) -> PiRational {
    let four_pi2 = PiRational::new(4, 1, 2);
    four_pi2.pow(d).div(&omega_d_exact(d).mul(volume).pow(2))
}

/// `int_0^{a sqrt(lambda)/pi} f_d(x) dx = a C_{d+1}/C_d lambda^{(d+1)/2}`.
pub fn fd_integral(d: u32, a: f64, lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 0.0;
    }
    a * c_d(d + 1) / c_d(d) * lambda.powf((d as f64 + 1.0) / 2.0)
}

fn require_d3(d: u32) -> Result<()> {
    if d < 3 {
        Err(Error::Case(format!(
            "constant defined for d >= 3, got d = {d}"
        )))
    } else {
        Ok(())
    }
}

/// `A_d = (1/2) (1 - ((4d-5)/(4d-4))^{d/2}) C_d |Omega|`.
pub fn a_d_const(d: u32, volume: f64) -> Result<f64> {
    require_d3(d)?;
    let df = d as f64;
    let ratio = (4.0 * df - 5.0) / (4.0 * df - 4.0);
    Ok(0.5 * (1.0 - ratio.powf(df / 2.0)) * c_d(d) * volume)
}

/// `B_d = (1/2) 3^{-d} C_d |Omega|`.
pub fn b_d_const(d: u32, volume: f64) -> Result<f64> {
    require_d3(d)?;
    Ok(0.5 * 3f64.powi(-(d as i32)) * c_d(d) * volume)
}
