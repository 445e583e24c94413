//! Arbitrary-precision rational scalars.
//!
//! Every coordinate in this crate is a [`Rat`]: an exact rational kept in
//! reduced form with a positive denominator. There is deliberately no
//! floating-point escape hatch; all geometric predicates are decided with
//! exact arithmetic. In JSON documents a `Rat` is always a string, `"p/q"`,
//! or just `"p"` when the denominator is one, so that round-trips are
//! bit-exact and never silently lose precision to a float lexer.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exact rational number. Always reduced; the denominator is always positive.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Rat(BigRational);

impl Rat {
    /// `numer / denom` as an exact rational.
    ///
    /// Panics if `denom == 0`.
    pub fn new(numer: i64, denom: i64) -> Rat {
        assert!(denom != 0, "rational with zero denominator");
        Rat(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    /// The integer `v` as a rational.
    pub fn int(v: i64) -> Rat {
        Rat(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn one() -> Rat {
        Rat(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn recip(&self) -> Rat {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rat(self.0.recip())
    }

    /// Midpoint `(a + b) / 2`, exact.
    pub fn mid(a: &Rat, b: &Rat) -> Rat {
        Rat((&a.0 + &b.0) / BigRational::from_integer(BigInt::from(2)))
    }

    /// Nearest `f64`, for rendering only — exact math never goes through
    /// floats.
    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn min(a: Rat, b: Rat) -> Rat {
        if a <= b {
            a
        } else {
            b
        }
    }

    pub fn max(a: Rat, b: Rat) -> Rat {
        if a >= b {
            a
        } else {
            b
        }
    }

    fn from_big(v: BigRational) -> Rat {
        Rat(v)
    }
}

impl From<i64> for Rat {
    fn from(v: i64) -> Rat {
        Rat::int(v)
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Rat) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Rat) -> Ordering {
        self.0.cmp(&other.0)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat::from_big((self.0).$method(rhs.0))
            }
        }

        impl $trait for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat::from_big((&self.0).$method(&rhs.0))
            }
        }

        impl $trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat::from_big((self.0).$method(&rhs.0))
            }
        }

        impl $trait<Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat::from_big((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rat::from_big(self.0 / rhs.0)
    }
}

impl Div for &Rat {
    type Output = Rat;
    fn div(self, rhs: &Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rat::from_big(&self.0 / &rhs.0)
    }
}

impl Div<&Rat> for Rat {
    type Output = Rat;
    fn div(self, rhs: &Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rat::from_big(self.0 / &rhs.0)
    }
}

impl Div<Rat> for &Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rat::from_big(&self.0 / rhs.0)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat::from_big(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat::from_big(-&self.0)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Error parsing a `"p/q"` string.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {input:?}: {reason}")]
pub struct ParseRatError {
    pub input: String,
    pub reason: String,
}

impl FromStr for Rat {
    type Err = ParseRatError;

    fn from_str(s: &str) -> Result<Rat, ParseRatError> {
        let err = |reason: &str| ParseRatError {
            input: s.to_owned(),
            reason: reason.to_owned(),
        };
        let (numer_str, denom_str) = match s.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (s, None),
        };
        let numer: BigInt = numer_str
            .trim()
            .parse()
            .map_err(|_| err("numerator is not an integer"))?;
        let denom: BigInt = match denom_str {
            Some(d) => d
                .trim()
                .parse()
                .map_err(|_| err("denominator is not an integer"))?,
            None => BigInt::one(),
        };
        if denom.is_zero() {
            return Err(err("denominator is zero"));
        }
        Ok(Rat(BigRational::new(numer, denom)))
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_form_and_positive_denominator() {
        let r = Rat::new(4, -6);
        assert_eq!(r.to_string(), "-2/3");
        assert_eq!(r, Rat::new(-2, 3));
    }

    #[test]
    fn integer_prints_without_denominator() {
        assert_eq!(Rat::new(14, 7).to_string(), "2");
        assert_eq!(Rat::int(-5).to_string(), "-5");
    }

    #[test]
    fn arithmetic_is_exact() {
        let third = Rat::new(1, 3);
        let sum = &third + &third + &third;
        assert_eq!(sum, Rat::one());
        assert_eq!(Rat::new(1, 3) * Rat::new(3, 5), Rat::new(1, 5));
        assert_eq!(Rat::new(1, 2) - Rat::new(1, 3), Rat::new(1, 6));
        assert_eq!(Rat::new(1, 2) / Rat::new(3, 2), Rat::new(1, 3));
    }

    #[test]
    fn ordering_is_exact() {
        assert!(Rat::new(1, 3) < Rat::new(34, 100));
        assert!(Rat::new(-1, 2) < Rat::zero());
        assert_eq!(Rat::mid(&Rat::int(1), &Rat::int(2)), Rat::new(3, 2));
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0", "7", "-7", "5/3", "-5/3", "1000000000000000000000/7"] {
            let r: Rat = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        // Unreduced input parses to the reduced value.
        assert_eq!("6/4".parse::<Rat>().unwrap().to_string(), "3/2");
        assert_eq!("4/-6".parse::<Rat>().unwrap().to_string(), "-2/3");
        assert!("1/0".parse::<Rat>().is_err());
        assert!("a/2".parse::<Rat>().is_err());
        assert!("1.5".parse::<Rat>().is_err());
    }

    #[test]
    fn serde_uses_strings() {
        let r = Rat::new(5, 3);
        assert_eq!(serde_json::to_string(&r).unwrap(), "\"5/3\"");
        let back: Rat = serde_json::from_str("\"5/3\"").unwrap();
        assert_eq!(back, r);
        let int: Rat = serde_json::from_str("\"4\"").unwrap();
        assert_eq!(int, Rat::int(4));
        assert!(serde_json::from_str::<Rat>("1.5").is_err());
    }
}
