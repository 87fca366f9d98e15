//! Exact rational scalars, plus the tolerance type used by the sampled
//! floating-point examples.
//!
//! Every decision made by the core (Lipschitz checks, step bounds, cover
//! search) is a threshold comparison, so the core computes exclusively with
//! reduced rationals. Floats appear only in the analytic example module, and
//! always behind a [`Tolerance`].

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// An exact rational number. Stored reduced with positive denominator, so
/// comparison operators are exact and total.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Scalar(Ratio<i128>);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("malformed scalar literal `{0}` (expected integer, p/q fraction, or decimal)")]
    Malformed(String),
    #[error("zero denominator in scalar literal `{0}`")]
    ZeroDenominator(String),
}

impl Scalar {
    pub fn new(numer: i128, denom: i128) -> Result<Self, ScalarError> {
        if denom == 0 {
            return Err(ScalarError::ZeroDenominator(format!("{numer}/{denom}")));
        }
        Ok(Scalar(Ratio::new(numer, denom)))
    }

    pub fn from_int(n: i64) -> Self {
        Scalar(Ratio::from_integer(n as i128))
    }

    pub fn zero() -> Self {
        Scalar(Ratio::zero())
    }

    pub fn one() -> Self {
        Scalar(Ratio::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn abs(&self) -> Self {
        Scalar(self.0.abs())
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Division that reports a zero divisor instead of panicking.
    pub fn checked_div(self, rhs: Self) -> Option<Self> {
        if rhs.is_zero() {
            None
        } else {
            Some(Scalar(self.0 / rhs.0))
        }
    }

    /// Largest integer n with n ≤ self.
    pub fn floor_int(&self) -> i128 {
        self.0.floor().to_integer()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 + rhs.0)
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 - rhs.0)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 * rhs.0)
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 / rhs.0)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom() == &1 {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parses an integer (`"2"`), a fraction (`"3/4"`), or a decimal (`"0.5"`).
/// Decimals become exact fractions over powers of ten.
pub fn parse_scalar(text: &str) -> Result<Scalar, ScalarError> {
    let t = text.trim();
    if t.is_empty() {
        return Err(ScalarError::Malformed(text.to_string()));
    }
    if let Some((num, den)) = t.split_once('/') {
        let n: i128 = num
            .trim()
            .parse()
            .map_err(|_| ScalarError::Malformed(text.to_string()))?;
        let d: i128 = den
            .trim()
            .parse()
            .map_err(|_| ScalarError::Malformed(text.to_string()))?;
        if d == 0 {
            return Err(ScalarError::ZeroDenominator(text.to_string()));
        }
        return Scalar::new(n, d);
    }
    if let Some((int_part, frac_part)) = t.split_once('.') {
        if frac_part.is_empty() || frac_part.len() > 18 || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ScalarError::Malformed(text.to_string()));
        }
        let negative = int_part.starts_with('-');
        let whole: i128 = if int_part == "-" || int_part.is_empty() {
            0
        } else {
            int_part
                .parse()
                .map_err(|_| ScalarError::Malformed(text.to_string()))?
        };
        let frac: i128 = frac_part
            .parse()
            .map_err(|_| ScalarError::Malformed(text.to_string()))?;
        let pow = 10i128.pow(frac_part.len() as u32);
        let magnitude = Scalar(Ratio::new(whole.abs() * pow + frac, pow));
        return Ok(if negative { -magnitude } else { magnitude });
    }
    let n: i128 = t
        .parse()
        .map_err(|_| ScalarError::Malformed(text.to_string()))?;
    Ok(Scalar(Ratio::from_integer(n)))
}

impl FromStr for Scalar {
    type Err = ScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_scalar(s)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct V;
        impl de::Visitor<'_> for V {
            type Value = Scalar;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a string like \"3/4\"")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Scalar, E> {
                parse_scalar(v).map_err(E::custom)
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Scalar, E> {
                Ok(Scalar::from_int(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Scalar, E> {
                i64::try_from(v).map(Scalar::from_int).map_err(E::custom)
            }
        }
        deserializer.deserialize_any(V)
    }
}

/// Comparison tolerances for the floating-point backend. `le` allows the
/// relative slack on the right-hand side; `eq` is absolute.
#[derive(Clone, Copy, Debug)]
pub struct Tolerance {
    pub eps: f64,
    pub rel_slack: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            eps: 1e-9,
            rel_slack: 1e-6,
        }
    }
}

impl Tolerance {
    pub fn le(&self, lhs: f64, rhs: f64) -> bool {
        lhs <= rhs * (1.0 + self.rel_slack) + self.eps
    }

    pub fn eq(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.eps
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_integer_and_decimal() {
        assert_eq!(parse_scalar("3/4").unwrap(), Scalar::new(3, 4).unwrap());
        assert_eq!(parse_scalar("2").unwrap(), Scalar::from_int(2));
        assert_eq!(parse_scalar("0.5").unwrap(), Scalar::new(1, 2).unwrap());
        assert_eq!(parse_scalar("-1.25").unwrap(), Scalar::new(-5, 4).unwrap());
        assert_eq!(parse_scalar(" 6/8 ").unwrap(), Scalar::new(3, 4).unwrap());
    }

    #[test]
    fn rejects_malformed_literals() {
        assert!(matches!(
            parse_scalar("1/0"),
            Err(ScalarError::ZeroDenominator(_))
        ));
        for bad in ["", "x", "1.2.3", "1/",  "1.", "--2"] {
            assert!(parse_scalar(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn display_roundtrips() {
        for s in ["3/4", "2", "-7/3", "0"] {
            let v = parse_scalar(s).unwrap();
            assert_eq!(parse_scalar(&v.to_string()).unwrap(), v);
        }
    }

    #[test]
    fn order_consistent_with_subtraction_sign() {
        let a = Scalar::new(1, 3).unwrap();
        let b = Scalar::new(2, 5).unwrap();
        assert!(a < b);
        assert!((a - b).is_negative());
        assert!(!(b - a).is_negative());
    }

    #[test]
    fn floor_int_matches_definition() {
        assert_eq!(parse_scalar("4").unwrap().floor_int(), 4);
        assert_eq!(parse_scalar("2/1").unwrap().floor_int(), 2);
        assert_eq!(parse_scalar("10").unwrap().floor_int(), 10);
        assert_eq!(parse_scalar("7/2").unwrap().floor_int(), 3);
        assert_eq!(parse_scalar("-1/2").unwrap().floor_int(), -1);
    }
}
