//! Exact numbers of the form `q * pi^p` with `q` rational.
//!
//! Every closed-form spectrum in this crate is a nonnegative integer multiple of such a
//! unit (for example `pi^2 / a^2` for an interval of length `a = pi/24` is exactly 576),
//! so verifications can be run in integer arithmetic without a float tie-break.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiRational {
    coeff: BigRational,
    pi_power: i32,
}

impl PiRational {
    pub fn new(num: i64, den: i64, pi_power: i32) -> Self {
        assert!(den != 0, "zero denominator");
        Self {
            coeff: BigRational::new(BigInt::from(num), BigInt::from(den)),
            pi_power,
        }
    }

    pub fn from_parts(coeff: BigRational, pi_power: i32) -> Self {
        Self { coeff, pi_power }
    }

    pub fn integer(n: i64) -> Self {
        Self::new(n, 1, 0)
    }

    pub fn one() -> Self {
        Self::integer(1)
    }

    pub fn pi() -> Self {
        Self::new(1, 1, 1)
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn pi_power(&self) -> i32 {
        self.pi_power
    }

    pub fn is_positive(&self) -> bool {
        self.coeff.is_positive()
    }

    /// True when the value is a plain rational (no factor of pi).
    pub fn is_rational(&self) -> bool {
        self.pi_power == 0 || self.coeff.is_zero()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            coeff: &self.coeff * &other.coeff,
            pi_power: self.pi_power + other.pi_power,
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        assert!(!other.coeff.is_zero(), "division by zero");
        Self {
            coeff: &self.coeff / &other.coeff,
            pi_power: self.pi_power - other.pi_power,
        }
    }

    pub fn recip(&self) -> Self {
        Self::one().div(self)
    }

    pub fn pow(&self, n: u32) -> Self {
        Self {
            coeff: num_traits::pow(self.coeff.clone(), n as usize),
            pi_power: self.pi_power * n as i32,
        }
    }

    pub fn scale_int(&self, n: u64) -> Self {
        Self {
            coeff: &self.coeff * BigRational::from_integer(BigInt::from(n)),
            pi_power: self.pi_power,
        }
    }

    pub fn to_f64(&self) -> f64 {
        let c = self.coeff.to_f64().unwrap_or(f64::NAN);
        c * std::f64::consts::PI.powi(self.pi_power)
    }

    /// Largest common unit `u` such that both `self` and `other` are integer multiples of
    /// `u`. Only defined when both carry the same power of pi and are positive.
    pub fn common_unit(&self, other: &Self) -> Option<Self> {
        if self.pi_power != other.pi_power || !self.is_positive() || !other.is_positive() {
            return None;
        }
        let (a, b) = (self.coeff.numer(), self.coeff.denom());
        let (c, d) = (other.coeff.numer(), other.coeff.denom());
        let coeff = BigRational::new(a.gcd(c), b.lcm(d));
        Some(Self {
            coeff,
            pi_power: self.pi_power,
        })
    }

    /// `self / unit` as a `u64`, when that quotient is a nonnegative integer.
    pub fn multiple_of(&self, unit: &Self) -> Option<u64> {
        if self.coeff.is_zero() {
            return Some(0);
        }
        if self.pi_power != unit.pi_power || unit.coeff.is_zero() {
            return None;
        }
        let q = &self.coeff / &unit.coeff;
        if !q.is_integer() || q.is_negative() {
            return None;
        }
        q.to_integer().to_u64()
    }
}

impl fmt::Display for PiRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pi_power {
            0 => write!(f, "{}", self.coeff),
            1 => write!(f, "({})*pi", self.coeff),
            p => write!(f, "({})*pi^{}", self.coeff, p),
        }
    }
}

/// A positive length, optionally with an exact `q * pi^p` form.
///
/// Accepted spellings: `10`, `2.5`, `3/2`, `pi`, `2pi`, `pi/24`, `1/4pi` (read as
/// `1/(4 pi)`), `2*pi/3`, and any float literal (inexact).
#[derive(Clone, Debug, PartialEq)]
pub struct Length {
    pub value: f64,
    pub exact: Option<PiRational>,
}

impl Length {
    /// Integer-valued floats are taken as exact; anything else is inexact.
    pub fn from_f64(value: f64) -> Self {
        let exact = (value.is_finite() && value.fract() == 0.0 && value.abs() < 9.0e15)
            .then(|| PiRational::new(value as i64, 1, 0));
        Self { value, exact }
    }

    pub fn exact(q: PiRational) -> Self {
        Self {
            value: q.to_f64(),
            exact: Some(q),
        }
    }
}

impl From<f64> for Length {
    fn from(value: f64) -> Self {
        Self::from_f64(value)
    }
}

impl FromStr for Length {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let cleaned: String = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '*')
            .collect::<String>()
            .to_lowercase()
            .replace('π', "pi");
        if cleaned.is_empty() {
            return Err(Error::Domain("empty length".into()));
        }
        let len = match parse_exact(&cleaned) {
            Some(q) => Length::exact(q),
            None => {
                let v: f64 = cleaned
                    .parse()
                    .map_err(|_| Error::Domain(format!("cannot parse length {s:?}")))?;
                Length::from_f64(v)
            }
        };
        if !(len.value.is_finite() && len.value > 0.0) {
            return Err(Error::Domain(format!("length must be positive, got {s:?}")));
        }
        Ok(len)
    }
}

fn parse_exact(s: &str) -> Option<PiRational> {
    let mut parts = s.split('/');
    let num = parse_factor(parts.next()?)?;
    let out = match parts.next() {
        None => num,
        Some(d) => {
            let den = parse_factor(d)?;
            if den.coeff.is_zero() {
                return None;
            }
            num.div(&den)
        }
    };
    if parts.next().is_some() {
        return None;
    }
    Some(out)
}

// `[decimal]` followed by an optional `pi`.
fn parse_factor(p: &str) -> Option<PiRational> {
    let (coef, pi_power) = match p.strip_suffix("pi") {
        Some(rest) => (rest, 1),
        None => (p, 0),
    };
    let coeff = if coef.is_empty() {
        if pi_power == 0 {
            return None;
        }
        BigRational::one()
    } else {
        parse_decimal(coef)?
    };
    Some(PiRational { coeff, pi_power })
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (int, frac) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s, ""),
    };
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let n: BigInt = digits.parse().ok()?;
    let d = num_traits::pow(BigInt::from(10), frac.len());
    Some(BigRational::new(n, d))
}
