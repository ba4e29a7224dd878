//! Exact rational coefficients.
//!
//! Every computation in this crate runs over the rationals with arbitrary
//! precision; there is no floating point anywhere. [`Scalar`] is the single
//! boundary behind which the number type lives, so swapping the coefficient
//! field (e.g. for a function field in a central-charge variable) means
//! touching this module only.
//!
//! Serialization is the plain `p/q` form with the sign on the numerator and
//! `/q` omitted when the denominator is 1, e.g. `-3/2`, `7`, `0`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

/// An exact rational number, always kept in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Scalar(BigRational);

impl Scalar {
    pub fn zero() -> Self {
        Scalar(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar(BigRational::from_integer(BigInt::from(n)))
    }

    /// `p/q` as an exact rational. Panics if `q == 0`; use the `FromStr`
    /// parser for fallible construction from text.
    pub fn ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "denominator must be nonzero");
        Scalar(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "division by zero scalar");
        Scalar(self.0.recip())
    }

    pub fn abs(&self) -> Self {
        Scalar(self.0.abs())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc *= self.clone();
        }
        acc
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // BigRational renders `p/q`, dropping `/q` when q == 1.
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Failed to read a scalar from its `p/q` text form.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {input:?}: {reason}")]
pub struct ParseScalarError {
    pub input: String,
    pub reason: String,
}

impl FromStr for Scalar {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim();
        if let Some((_, den)) = trimmed.split_once('/') {
            // Reject q == 0 with a clear message instead of num-rational's panic path.
            if den.trim().parse::<BigInt>().map(|d| d.is_zero()).unwrap_or(false) {
                return Err(ParseScalarError {
                    input: s.to_string(),
                    reason: "zero denominator".to_string(),
                });
            }
        }
        trimmed
            .parse::<BigRational>()
            .map(Scalar)
            .map_err(|e| ParseScalarError {
                input: s.to_string(),
                reason: e.to_string(),
            })
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                Scalar((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        assert!(!rhs.is_zero(), "division by zero scalar");
        Scalar(self.0 / rhs.0)
    }
}

impl<'a> Div<&'a Scalar> for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        assert!(!rhs.is_zero(), "division by zero scalar");
        Scalar(&self.0 / &rhs.0)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-&self.0)
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        self.0 += rhs.0;
    }
}

impl SubAssign for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        self.0 -= rhs.0;
    }
}

impl MulAssign for Scalar {
    fn mul_assign(&mut self, rhs: Scalar) {
        self.0 *= rhs.0;
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

impl Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::one(), |a, b| a * b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_drops_unit_denominator() {
        assert_eq!(Scalar::ratio(3, 2).to_string(), "3/2");
        assert_eq!(Scalar::ratio(-3, 2).to_string(), "-3/2");
        assert_eq!(Scalar::from_int(7).to_string(), "7");
        assert_eq!(Scalar::zero().to_string(), "0");
        // Sign lives on the numerator even when constructed on the denominator.
        assert_eq!(Scalar::ratio(3, -2).to_string(), "-3/2");
    }

    #[test]
    fn parse_reduces_to_lowest_terms() {
        let s: Scalar = "4/6".parse().unwrap();
        assert_eq!(s, Scalar::ratio(2, 3));
        let s: Scalar = "-10/5".parse().unwrap();
        assert_eq!(s, Scalar::from_int(-2));
        assert_eq!("0/9".parse::<Scalar>().unwrap(), Scalar::zero());
    }

    #[test]
    fn parse_rejects_garbage_and_zero_denominator() {
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("".parse::<Scalar>().is_err());
        assert!("a/b".parse::<Scalar>().is_err());
        assert!("1.5".parse::<Scalar>().is_err());
    }

    #[test]
    fn roundtrip_through_display() {
        for s in [
            Scalar::ratio(-7, 12),
            Scalar::from_int(0),
            Scalar::from_int(41),
            Scalar::ratio(355, 113),
        ] {
            assert_eq!(s.to_string().parse::<Scalar>().unwrap(), s);
        }
    }

    #[test]
    fn exact_arithmetic_has_no_drift() {
        // 1/3 summed three times is exactly 1.
        let third = Scalar::ratio(1, 3);
        let sum = &(&third + &third) + &third;
        assert!(sum.is_one());
        // (i^3 - i)/12 for i = 2 is exactly 1/2, the central coefficient seen
        // in bracket computations.
        let i = Scalar::from_int(2);
        let num = &(&i * &i) * &i - i;
        assert_eq!(num / Scalar::from_int(12), Scalar::ratio(1, 2));
    }

    #[test]
    fn serde_uses_string_form() {
        let s = Scalar::ratio(-3, 2);
        assert_eq!(serde_json::to_string(&s).unwrap(), "\"-3/2\"");
        let back: Scalar = serde_json::from_str("\"-3/2\"").unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<Scalar>("\"1/0\"").is_err());
    }
}
