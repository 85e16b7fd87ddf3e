//! Exact rationals and their wire representation.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Normalized arbitrary-precision rational.
pub type Rational = num_rational::BigRational;

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `count / 2^n` as an exact rational.
pub fn dyadic(count: &BigUint, n: u32) -> Rational {
    Rational::new(BigInt::from(count.clone()), BigInt::one() << n as usize)
}

pub fn half() -> Rational {
    ratio(1, 2)
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Decimal expansion rounded half away from zero, computed from the exact value.
pub fn to_decimal(r: &Rational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = r.numer() * &scale;
    let den = r.denom();
    let (q, rem) = scaled.abs().div_rem(den);
    let q = if rem * 2u32 >= *den { q + 1 } else { q };
    let sign = if r.is_negative() && !q.is_zero() {
        "-"
    } else {
        ""
    };
    let s = q.to_string();
    if digits == 0 {
        return format!("{sign}{s}");
    }
    let padded = format!("{:0>width$}", s, width = digits + 1);
    let (int, frac) = padded.split_at(padded.len() - digits);
    format!("{sign}{int}.{frac}")
}

/// `{"num": "...", "den": "...", "decimal": "..."}`; integers travel as decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decimal: Option<String>,
}

impl RationalJson {
    pub fn parse(&self) -> Result<Rational> {
        parse_parts(&self.num, &self.den)
    }
}

impl From<&Rational> for RationalJson {
    fn from(r: &Rational) -> Self {
        RationalJson {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
            decimal: Some(to_decimal(r, 12)),
        }
    }
}

pub fn parse_parts(num: &str, den: &str) -> Result<Rational> {
    let n: BigInt = num
        .trim()
        .parse()
        .map_err(|_| Error::Json(format!("bad numerator {num:?}")))?;
    let d: BigInt = den
        .trim()
        .parse()
        .map_err(|_| Error::Json(format!("bad denominator {den:?}")))?;
    if d.is_zero() {
        return Err(Error::Json("zero denominator".into()));
    }
    Ok(Rational::new(n, d))
}

/// Parses `"3/8"`, `"1"`, or `"-2/5"`.
pub fn parse_fraction(s: &str) -> Result<Rational> {
    match s.split_once('/') {
        Some((n, d)) => parse_parts(n, d),
        None => parse_parts(s, "1"),
    }
}
