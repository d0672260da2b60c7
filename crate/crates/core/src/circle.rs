//! Exact elements of Q/Z, the torsion of the circle group written additively.

use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// `num/den` reduced, with `0 ≤ num < den`; zero is `0/1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CircleValue {
    num: u64,
    den: u64,
}

impl CircleValue {
    pub const ZERO: CircleValue = CircleValue { num: 0, den: 1 };

    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let num = num.mod_floor(&den);
        let g = num.gcd(&den).max(1);
        let (num, den) = (num / g, den / g);
        let den = if num == 0 { 1 } else { den };
        CircleValue {
            num: u64::try_from(num).expect("numerator fits u64"),
            den: u64::try_from(den).expect("denominator exceeds u64"),
        }
    }

    pub fn zero() -> Self {
        Self::ZERO
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// Integer multiple `s·self`.
    pub fn scale(self, s: i64) -> Self {
        CircleValue::new(self.num as i128 * s as i128, self.den as i128)
    }

    /// `self` as a float in `[0, 1)`.
    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// The additive order in Q/Z.
    pub fn order(self) -> u64 {
        self.den
    }
}

impl Add for CircleValue {
    type Output = CircleValue;
    fn add(self, o: CircleValue) -> CircleValue {
        if o.num == 0 {
            return self;
        }
        if self.num == 0 {
            return o;
        }
        let l = (self.den as i128).lcm(&(o.den as i128));
        CircleValue::new(self.num as i128 * (l / self.den as i128) + o.num as i128 * (l / o.den as i128), l)
    }
}

impl Neg for CircleValue {
    type Output = CircleValue;
    fn neg(self) -> CircleValue {
        if self.num == 0 {
            self
        } else {
            CircleValue { num: self.den - self.num, den: self.den }
        }
    }
}

impl Sub for CircleValue {
    type Output = CircleValue;
    fn sub(self, o: CircleValue) -> CircleValue {
        self + (-o)
    }
}

impl AddAssign for CircleValue {
    fn add_assign(&mut self, o: CircleValue) {
        *self = *self + o;
    }
}

impl SubAssign for CircleValue {
    fn sub_assign(&mut self, o: CircleValue) {
        *self = *self - o;
    }
}

impl std::iter::Sum for CircleValue {
    fn sum<I: Iterator<Item = CircleValue>>(iter: I) -> Self {
        iter.fold(CircleValue::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for CircleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for CircleValue {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Usage(format!("cannot parse circle value {s:?}"));
        let s = s.trim();
        match s.split_once('/') {
            Some((a, b)) => {
                let a: i128 = a.trim().parse().map_err(|_| bad())?;
                let b: i128 = b.trim().parse().map_err(|_| bad())?;
                if b == 0 {
                    return Err(bad());
                }
                Ok(CircleValue::new(a, b))
            }
            None => {
                let a: i128 = s.parse().map_err(|_| bad())?;
                Ok(CircleValue::new(a, 1))
            }
        }
    }
}

impl Serialize for CircleValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CircleValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
