//! Exact rationals.
//!
//! [`Q`] wraps [`BigRational`], which keeps every value in lowest terms with a
//! positive denominator. Text form is always `num/den`, including integers
//! (`3/1`), so that serialized traces are unambiguous.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// An exact rational number.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Q(BigRational);

impl Q {
    pub fn zero() -> Self {
        Q(BigRational::zero())
    }

    pub fn one() -> Self {
        Q(BigRational::one())
    }

    pub fn int(n: i64) -> Self {
        Q(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num/den`. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Q(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Result<Self, Error> {
        if den.is_zero() {
            return Err(Error::Parse {
                line: 0,
                message: "zero denominator".into(),
            });
        }
        Ok(Q(BigRational::new(num, den)))
    }

    /// `2^k` for any integer `k`.
    pub fn pow2(k: i64) -> Self {
        let p = BigInt::one() << k.unsigned_abs();
        if k >= 0 {
            Q(BigRational::from_integer(p))
        } else {
            Q(BigRational::new(BigInt::one(), p))
        }
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
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

    pub fn abs(&self) -> Self {
        Q(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        Q(self.0.recip())
    }

    /// Smallest integer `>= self`.
    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// Largest integer `<= self`.
    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Largest `k >= 1` with `2^-k <= self`, for `0 < self <= 1/2`;
    /// returns `None` when `self <= 0`, and `Some(1)` when `self >= 1/2`.
    pub fn dyadic_floor_exponent(&self) -> Option<u32> {
        if !self.is_positive() {
            return None;
        }
        let mut k = 1u32;
        let mut t = Q::new(1, 2);
        while &t > self {
            k += 1;
            t = t * Q::new(1, 2);
        }
        Some(k)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    /// Lossy conversion for human-facing summaries only.
    pub fn to_f64_lossy(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl From<BigRational> for Q {
    fn from(r: BigRational) -> Self {
        Q(r)
    }
}

impl From<i64> for Q {
    fn from(n: i64) -> Self {
        Q::int(n)
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Q {
    type Err = Error;

    /// Accepts `num/den` or a bare integer.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |m: &str| Error::Parse {
            line: 0,
            message: format!("{m}: {s:?}"),
        };
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigInt = n.parse().map_err(|_| bad("bad numerator"))?;
        let den: BigInt = d.parse().map_err(|_| bad("bad denominator"))?;
        if den.is_zero() {
            return Err(bad("zero denominator"));
        }
        Ok(Q(BigRational::new(num, den)))
    }
}

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Q> for Q {
            type Output = Q;
            fn $m(self, rhs: Q) -> Q {
                Q(self.0.$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a Q> for Q {
            type Output = Q;
            fn $m(self, rhs: &'a Q) -> Q {
                Q(self.0.$m(&rhs.0))
            }
        }
        impl<'a> $tr<Q> for &'a Q {
            type Output = Q;
            fn $m(self, rhs: Q) -> Q {
                Q((&self.0).$m(rhs.0))
            }
        }
        impl<'a, 'b> $tr<&'b Q> for &'a Q {
            type Output = Q;
            fn $m(self, rhs: &'b Q) -> Q {
                Q((&self.0).$m(&rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Q {
    type Output = Q;
    fn neg(self) -> Q {
        Q(-self.0)
    }
}

impl Neg for &Q {
    type Output = Q;
    fn neg(self) -> Q {
        Q(-(&self.0))
    }
}

impl AddAssign<&Q> for Q {
    fn add_assign(&mut self, rhs: &Q) {
        self.0 += &rhs.0;
    }
}

impl AddAssign<Q> for Q {
    fn add_assign(&mut self, rhs: Q) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Q> for Q {
    fn sub_assign(&mut self, rhs: &Q) {
        self.0 -= &rhs.0;
    }
}

impl Sum for Q {
    fn sum<I: Iterator<Item = Q>>(iter: I) -> Q {
        iter.fold(Q::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Q> for Q {
    fn sum<I: Iterator<Item = &'a Q>>(iter: I) -> Q {
        iter.fold(Q::zero(), |acc, x| acc + x)
    }
}

/// Shorthand for `Q::new(n, d)`.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn lowest_terms_and_sign() {
        let x = Q::new(6, -8);
        assert_eq!(x.to_string(), "-3/4");
        assert_eq!(Q::int(3).to_string(), "3/1");
    }

    #[test]
    fn pow2_both_directions() {
        assert_eq!(Q::pow2(3), Q::int(8));
        assert_eq!(Q::pow2(-3), q(1, 8));
        assert_eq!(Q::pow2(0), Q::one());
    }

    #[test]
    fn parse_forms() {
        assert_eq!("7".parse::<Q>().unwrap(), Q::int(7));
        assert_eq!(" -2/4 ".parse::<Q>().unwrap(), q(-1, 2));
        assert!("1/0".parse::<Q>().is_err());
        assert!("x/2".parse::<Q>().is_err());
    }

    #[test]
    fn dyadic_floor() {
        assert_eq!(q(3, 8).dyadic_floor_exponent(), Some(2));
        assert_eq!(q(1, 2).dyadic_floor_exponent(), Some(1));
        assert_eq!(q(1, 1).dyadic_floor_exponent(), Some(1));
        assert_eq!(q(1, 9).dyadic_floor_exponent(), Some(4));
        assert_eq!(Q::zero().dyadic_floor_exponent(), None);
    }

    proptest! {
        #[test]
        fn text_and_json_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
            let x = Q::new(n, d);
            let back: Q = x.to_string().parse().unwrap();
            prop_assert_eq!(&back, &x);
            let json = serde_json::to_string(&x).unwrap();
            let back: Q = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(back, x);
        }
    }
}
