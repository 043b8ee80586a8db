//! Real quadratic field elements `a + b·√d`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{format_rational, rational_from_json, rational_to_f64, Field, Rational};

/// `a + b·√d` with `a`, `b` rational and `d > 1` square-free.
///
/// Elements with `b = 0` are rationals and carry `d = 0`; they combine with
/// elements of any quadratic field. Combining two irrational elements over
/// different radicands is a programming error and panics.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadExt {
    a: Rational,
    b: Rational,
    d: u64,
}

impl QuadExt {
    pub fn new(a: Rational, b: Rational, d: u64) -> Result<Self> {
        if Zero::is_zero(&b) {
            return Ok(Self::rational(a));
        }
        if d < 2 || !is_square_free(d) {
            return Err(Error::Parse(format!("radicand {d} is not a square-free integer > 1")));
        }
        Ok(Self { a, b, d })
    }

    pub fn rational(a: Rational) -> Self {
        Self { a, b: <Rational as Zero>::zero(), d: 0 }
    }

    /// `√d`.
    pub fn sqrt(d: u64) -> Result<Self> {
        Self::new(<Rational as Zero>::zero(), Rational::from_integer(1.into()), d)
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn radical_part(&self) -> &Rational {
        &self.b
    }

    fn merged_d(&self, other: &Self) -> u64 {
        match (self.d, other.d) {
            (0, d) | (d, 0) => d,
            (d1, d2) if d1 == d2 => d1,
            (d1, d2) => panic!("cannot combine elements of Q(√{d1}) and Q(√{d2})"),
        }
    }

    fn build(a: Rational, b: Rational, d: u64) -> Self {
        if Zero::is_zero(&b) {
            Self::rational(a)
        } else {
            Self { a, b, d }
        }
    }

    fn conjugate(&self) -> Self {
        Self::build(self.a.clone(), -self.b.clone(), self.d)
    }

    /// `a² − b²d`, the field norm.
    fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * Rational::from_integer(self.d.into())
    }
}

pub(crate) fn is_square_free(d: u64) -> bool {
    let mut k = 2u64;
    while k.saturating_mul(k) <= d {
        if d % (k * k) == 0 {
            return false;
        }
        k += 1;
    }
    true
}

impl fmt::Debug for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if Zero::is_zero(&self.b) {
            write!(f, "{}", format_rational(&self.a))
        } else {
            write!(f, "{} + {}·√{}", format_rational(&self.a), format_rational(&self.b), self.d)
        }
    }
}

impl PartialOrd for QuadExt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadExt {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.clone() - other).sign()
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt::build(-self.a, -self.b, self.d)
    }
}

impl<'a> Add<&'a QuadExt> for QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: &QuadExt) -> QuadExt {
        let d = self.merged_d(rhs);
        QuadExt::build(self.a + &rhs.a, self.b + &rhs.b, d)
    }
}

impl<'a> Sub<&'a QuadExt> for QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: &QuadExt) -> QuadExt {
        let d = self.merged_d(rhs);
        QuadExt::build(self.a - &rhs.a, self.b - &rhs.b, d)
    }
}

impl<'a> Mul<&'a QuadExt> for QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: &QuadExt) -> QuadExt {
        let d = self.merged_d(rhs);
        let dq = Rational::from_integer(d.into());
        let a = &self.a * &rhs.a + &self.b * &rhs.b * dq;
        let b = &self.a * &rhs.b + &rhs.a * &self.b;
        QuadExt::build(a, b, d)
    }
}

impl<'a> Div<&'a QuadExt> for QuadExt {
    type Output = QuadExt;
    fn div(self, rhs: &QuadExt) -> QuadExt {
        let norm = rhs.norm();
        assert!(!Zero::is_zero(&norm), "division by zero");
        let num = self * &rhs.conjugate();
        QuadExt::build(num.a / &norm, num.b / &norm, num.d)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr<QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: QuadExt) -> QuadExt {
                <QuadExt as $tr<&QuadExt>>::$method(self, &rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Field for QuadExt {
    fn zero() -> Self {
        Self::rational(<Rational as Zero>::zero())
    }

    fn one() -> Self {
        Self::rational(Rational::from_integer(1.into()))
    }

    fn from_rational(r: Rational) -> Self {
        Self::rational(r)
    }

    fn radicand(&self) -> Option<u64> {
        (self.d != 0).then_some(self.d)
    }

    fn admits_radicand(d: u64) -> bool {
        d >= 2 && is_square_free(d)
    }

    fn to_rational(&self) -> Option<Rational> {
        Zero::is_zero(&self.b).then(|| self.a.clone())
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.a) && Zero::is_zero(&self.b)
    }

    fn sign(&self) -> Ordering {
        let sa = Field::sign(&self.a);
        let sb = Field::sign(&self.b);
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        // Opposite signs: the larger of a² and b²d wins. They never tie since √d is irrational.
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * Rational::from_integer(self.d.into());
        if a2 > b2d {
            sa
        } else {
            sb
        }
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(&self.a) + rational_to_f64(&self.b) * (self.d as f64).sqrt()
    }

    fn floor(&self) -> BigInt {
        if Zero::is_zero(&self.b) {
            return Field::floor(&self.a);
        }
        // |a + b√d| < |a| + |b|·d + 1, so the floor lies in [-bound, bound].
        let bound: BigInt = Field::floor(&(Signed::abs(&self.a) + Signed::abs(&self.b) * Rational::from_integer(self.d.into()))) + 2;
        let mut lo = -bound.clone();
        let mut hi = bound;
        while &hi - &lo > BigInt::from(1) {
            let mid: BigInt = (&lo + &hi) >> 1;
            if QuadExt::from_bigint(mid.clone()) <= *self {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    fn to_json(&self) -> Value {
        if Zero::is_zero(&self.b) {
            Value::String(format_rational(&self.a))
        } else {
            json!({ "a": format_rational(&self.a), "b": format_rational(&self.b), "d": self.d })
        }
    }

    fn from_json(value: &Value) -> Result<Self> {
        match value {
            Value::Object(map) => {
                let get = |k: &str| map.get(k).ok_or_else(|| Error::Parse(format!("missing field {k:?}")));
                let a = rational_from_json(get("a")?)?;
                let b = rational_from_json(get("b")?)?;
                let d = get("d")?
                    .as_u64()
                    .ok_or_else(|| Error::Parse("radicand must be a positive integer".into()))?;
                QuadExt::new(a, b, d)
            }
            other => Ok(QuadExt::rational(rational_from_json(other)?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::int_rational;

    fn qe(a: i64, b: i64, d: u64) -> QuadExt {
        QuadExt::new(int_rational(a), int_rational(b), d).unwrap()
    }

    #[test]
    fn sign_by_norm_comparison() {
        // 2 - √5 < 0, 3 - √5 > 0, -3 + √5 < 0
        assert_eq!(qe(2, -1, 5).sign(), Ordering::Less);
        assert_eq!(qe(3, -1, 5).sign(), Ordering::Greater);
        assert_eq!(qe(-3, 1, 5).sign(), Ordering::Less);
        assert_eq!(qe(0, 1, 2).sign(), Ordering::Greater);
        assert_eq!(QuadExt::zero().sign(), Ordering::Equal);
    }

    #[test]
    fn field_operations() {
        let r5 = QuadExt::sqrt(5).unwrap();
        assert_eq!(r5.clone() * r5.clone(), QuadExt::from_int(5));
        let x = qe(1, 2, 5);
        let inv = QuadExt::one() / x.clone();
        assert_eq!(x * inv, QuadExt::one());
        assert_eq!((r5.clone() - r5).radicand(), None);
    }

    #[test]
    fn floor_of_irrationals() {
        assert_eq!(Field::floor(&QuadExt::sqrt(5).unwrap()), BigInt::from(2));
        assert_eq!(Field::floor(&-QuadExt::sqrt(5).unwrap()), BigInt::from(-3));
        assert_eq!(Field::floor(&qe(10, -3, 2)), BigInt::from(5));
    }

    #[test]
    fn rejects_bad_radicands() {
        assert!(QuadExt::new(int_rational(0), int_rational(1), 4).is_err());
        assert!(QuadExt::new(int_rational(0), int_rational(1), 1).is_err());
        assert!(QuadExt::new(int_rational(0), int_rational(1), 12).is_err());
        assert!(QuadExt::new(int_rational(3), int_rational(0), 4).is_ok());
    }

    #[test]
    fn json_round_trip() {
        for x in [qe(1, 2, 5), qe(-3, 0, 0), QuadExt::new(Rational::new(1.into(), 3.into()), int_rational(-7), 13).unwrap()] {
            assert_eq!(QuadExt::from_json(&x.to_json()).unwrap(), x);
        }
    }

    #[test]
    #[should_panic]
    fn mixing_fields_panics() {
        let _ = QuadExt::sqrt(2).unwrap() + QuadExt::sqrt(3).unwrap();
    }
}
