//! Exact ordered fields used as coordinate scalars.
//!
//! Every geometric type in the crate is generic over [`Field`]. Two
//! implementations ship: [`Rational`] (arbitrary precision rationals) and
//! [`QuadExt`](crate::quad::QuadExt) (elements `a + b·√d` of a real quadratic
//! field). Nothing in the kernel rounds; `to_f64` exists only for rendering
//! and for test oracles.

use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

/// Arbitrary precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// An exact, totally ordered field with decidable sign.
pub trait Field:
    Clone
    + Debug
    + Display
    + Eq
    + Ord
    + Hash
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: Rational) -> Self;
    /// `Some` when the value lies in the rational subfield.
    fn to_rational(&self) -> Option<Rational>;
    fn is_zero(&self) -> bool;
    /// Sign relative to zero.
    fn sign(&self) -> Ordering;
    fn to_f64(&self) -> f64;
    /// Largest integer not exceeding the value.
    fn floor(&self) -> BigInt;
    fn to_json(&self) -> Value;
    fn from_json(value: &Value) -> Result<Self>;

    /// Whether coordinates in `Q(√d)` can be represented.
    fn admits_radicand(_d: u64) -> bool {
        false
    }

    /// Radicand of the quadratic field the value needs, `None` when rational.
    fn radicand(&self) -> Option<u64> {
        None
    }

    fn from_int(i: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(i)))
    }

    fn from_bigint(i: BigInt) -> Self {
        Self::from_rational(Rational::from_integer(i))
    }

    fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn half(&self) -> Self {
        self.clone() / Self::from_int(2)
    }

    fn twice(&self) -> Self {
        self.clone() + self
    }

    /// Smallest integer not below the value.
    fn ceil(&self) -> BigInt {
        let f = self.floor();
        if Self::from_bigint(f.clone()) == *self {
            f
        } else {
            f + 1
        }
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn from_rational(r: Rational) -> Self {
        r
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn sign(&self) -> Ordering {
        self.numer().sign().cmp(&num_bigint::Sign::NoSign)
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }

    fn floor(&self) -> BigInt {
        self.numer().div_floor(self.denom())
    }

    fn to_json(&self) -> Value {
        Value::String(format_rational(self))
    }

    fn from_json(value: &Value) -> Result<Self> {
        rational_from_json(value)
    }
}

/// Formats as `"p"` for integers and `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p"`, `"-p/q"` or a decimal such as `"0.25"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::Parse(format!("invalid rational {text:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole: BigInt = match whole.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            w => w.parse().map_err(|_| bad())?,
        };
        let frac_num: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let magnitude = Rational::new(whole * &scale + frac_num, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    let n: BigInt = t.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

pub(crate) fn rational_from_json(value: &Value) -> Result<Rational> {
    match value {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rational::from_integer(BigInt::from(i)))
            } else if let Some(u) = n.as_u64() {
                Ok(Rational::from_integer(BigInt::from(u)))
            } else {
                Err(Error::Parse(format!(
                    "non-integer JSON number {n}; write rationals as \"p/q\" strings"
                )))
            }
        }
        other => Err(Error::Parse(format!("expected a rational, found {other}"))),
    }
}

pub(crate) fn rational_to_f64(r: &Rational) -> f64 {
    if let Some(f) = ToPrimitive::to_f64(r) {
        if f.is_finite() {
            return f;
        }
    }
    // Scale both parts down to keep the quotient finite.
    let nbits = r.numer().bits() as i64;
    let dbits = r.denom().bits() as i64;
    let shift = (nbits.max(dbits) - 1000).max(0) as usize;
    let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    if d == 0.0 {
        if Signed::is_negative(r) {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    } else {
        n / d
    }
}

/// Least positive rational that is an integer multiple of every input.
///
/// With `r_j = p_j / q_j` in lowest terms this is `lcm(p_j) / gcd(q_j)`.
/// Returns `None` for an empty slice or a non-positive entry.
pub fn rational_lcm(values: &[Rational]) -> Option<Rational> {
    let mut numer: Option<BigInt> = None;
    let mut denom: Option<BigInt> = None;
    for v in values {
        if !Signed::is_positive(v) {
            return None;
        }
        numer = Some(match numer {
            None => v.numer().clone(),
            Some(n) => n.lcm(v.numer()),
        });
        denom = Some(match denom {
            None => v.denom().clone(),
            Some(d) => d.gcd(v.denom()),
        });
    }
    Some(Rational::new(numer?, denom?))
}

#[cfg(test)]
pub(crate) fn int_rational(i: i64) -> Rational {
    Rational::from_integer(BigInt::from(i))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("7").unwrap(), q(7, 1));
        assert_eq!(parse_rational("-6/4").unwrap(), q(-3, 2));
        assert_eq!(parse_rational("0.25").unwrap(), q(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), q(-3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1.").is_err());
    }

    #[test]
    fn format_round_trips() {
        for r in [q(0, 1), q(-3, 2), q(12, 1), q(5, 7)] {
            assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
            assert_eq!(Rational::from_json(&r.to_json()).unwrap(), r);
        }
        assert_eq!(Rational::from_json(&serde_json::json!(-4)).unwrap(), q(-4, 1));
        assert!(Rational::from_json(&serde_json::json!(0.5)).is_err());
    }

    #[test]
    fn floor_and_ceil() {
        assert_eq!(Field::floor(&q(-3, 2)), BigInt::from(-2));
        assert_eq!(Field::floor(&q(3, 2)), BigInt::from(1));
        assert_eq!(Field::ceil(&q(3, 2)), BigInt::from(2));
        assert_eq!(Field::ceil(&q(4, 1)), BigInt::from(4));
    }

    #[test]
    fn lcm_of_rationals() {
        assert_eq!(rational_lcm(&[q(48, 1), q(48, 1)]).unwrap(), q(48, 1));
        assert_eq!(rational_lcm(&[q(4, 1), q(6, 1)]).unwrap(), q(12, 1));
        assert_eq!(rational_lcm(&[q(1, 2), q(1, 3)]).unwrap(), q(1, 1));
        assert_eq!(rational_lcm(&[q(3, 4), q(9, 10)]).unwrap(), q(9, 2));
        assert!(rational_lcm(&[]).is_none());
        assert!(rational_lcm(&[q(-1, 1)]).is_none());
    }

    #[test]
    fn huge_values_convert_to_finite_floats() {
        let big = Rational::new(num_traits::pow(BigInt::from(10), 400), num_traits::pow(BigInt::from(10), 399));
        assert!((rational_to_f64(&big) - 10.0).abs() < 1e-9);
    }
}
