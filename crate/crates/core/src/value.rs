//! Exact nonnegative rational values used for absolute values, norms,
//! weights and radii.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A nonnegative rational in lowest terms.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NormValue(Ratio<i128>);

impl NormValue {
    pub const ZERO: NormValue = NormValue(Ratio::new_raw(0, 1));
    pub const ONE: NormValue = NormValue(Ratio::new_raw(1, 1));

    /// Builds `num/den`. Panics on a zero denominator or a negative result.
    pub fn new(num: i128, den: i128) -> Self {
        let r = Ratio::new(num, den);
        assert!(!r.is_negative(), "norm values are nonnegative");
        NormValue(r)
    }

    pub fn integer(n: i128) -> Self {
        Self::new(n, 1)
    }

    /// `base^exp` for a possibly negative exponent.
    pub fn pow(base: u64, exp: i32) -> Self {
        let b = base as i128;
        let mag = b.checked_pow(exp.unsigned_abs()).expect("power overflows i128");
        if exp >= 0 {
            NormValue(Ratio::from_integer(mag))
        } else {
            NormValue(Ratio::new(1, mag))
        }
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn ratio(&self) -> Ratio<i128> {
        self.0
    }

    pub fn checked_mul(&self, other: &NormValue) -> Option<NormValue> {
        // Reduce crosswise first so the product stays in range when it can.
        let g1 = num_integer::gcd(self.numer(), other.denom());
        let g2 = num_integer::gcd(other.numer(), self.denom());
        if g1 == 0 || g2 == 0 {
            return Some(NormValue::ZERO);
        }
        let n = (self.numer() / g1).checked_mul(other.numer() / g2)?;
        let d = (self.denom() / g2).checked_mul(other.denom() / g1)?;
        Some(NormValue(Ratio::new(n, d)))
    }

    pub fn checked_div(&self, other: &NormValue) -> Option<NormValue> {
        if other.is_zero() {
            return None;
        }
        self.checked_mul(&NormValue(other.0.recip()))
    }

    /// Writes `self = base^k` for an integer `k`, if possible.
    pub fn log_exact(&self, base: u64) -> Option<i32> {
        if self.is_zero() {
            return None;
        }
        let b = base as i128;
        let (mut n, mut d) = (self.numer(), self.denom());
        let mut k = 0i32;
        while n % b == 0 {
            n /= b;
            k += 1;
        }
        while d % b == 0 {
            d /= b;
            k -= 1;
        }
        (n == 1 && d == 1).then_some(k)
    }
}

impl std::ops::Mul for NormValue {
    type Output = NormValue;
    fn mul(self, rhs: NormValue) -> NormValue {
        self.checked_mul(&rhs).expect("norm value product overflows")
    }
}

impl std::ops::Div for NormValue {
    type Output = NormValue;
    fn div(self, rhs: NormValue) -> NormValue {
        self.checked_div(&rhs).expect("division by zero or overflow")
    }
}

impl fmt::Display for NormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for NormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational {0:?}: expected \"num\" or \"num/den\" with a nonnegative value")]
pub struct ParseValueError(pub String);

impl FromStr for NormValue {
    type Err = ParseValueError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseValueError(s.to_string());
        let (n, d) = match s.trim().split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: i128 = n.parse().map_err(|_| err())?;
        let d: i128 = d.parse().map_err(|_| err())?;
        if d == 0 {
            return Err(err());
        }
        let r = Ratio::new(n, d);
        if r.is_negative() {
            return Err(err());
        }
        Ok(NormValue(r))
    }
}

impl Serialize for NormValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for NormValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Str(String),
            Int(u64),
        }
        match Raw::deserialize(d)? {
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::Int(n) => Ok(NormValue::integer(n as i128)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints_lowest_terms() {
        let v: NormValue = "6/4".parse().unwrap();
        assert_eq!(v.to_string(), "3/2");
        assert_eq!("9".parse::<NormValue>().unwrap(), NormValue::integer(9));
        assert!("-1/3".parse::<NormValue>().is_err());
        assert!("1/0".parse::<NormValue>().is_err());
        assert!("x".parse::<NormValue>().is_err());
    }

    #[test]
    fn powers_and_logs() {
        assert_eq!(NormValue::pow(3, -2), NormValue::new(1, 9));
        assert_eq!(NormValue::new(1, 27).log_exact(3), Some(-3));
        assert_eq!(NormValue::integer(9).log_exact(3), Some(2));
        assert_eq!(NormValue::integer(2).log_exact(3), None);
        assert_eq!(NormValue::new(2, 9).log_exact(3), None);
    }

    #[test]
    fn ordering_is_exact() {
        let a = NormValue::new(1, 3);
        let b = NormValue::new(333_333_333_333, 1_000_000_000_000);
        assert!(b < a);
        assert_eq!(a * NormValue::integer(3), NormValue::ONE);
    }
}
