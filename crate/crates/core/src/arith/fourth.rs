use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Sign;
use crate::error::Error;

/// A fourth root of unity `i^k`, stored as `k mod 4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FourthRoot(u8);

impl FourthRoot {
    pub const ONE: FourthRoot = FourthRoot(0);
    pub const I: FourthRoot = FourthRoot(1);
    pub const MINUS_ONE: FourthRoot = FourthRoot(2);
    pub const MINUS_I: FourthRoot = FourthRoot(3);

    pub fn i_pow(k: i64) -> FourthRoot {
        FourthRoot(k.rem_euclid(4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn pow(self, n: i64) -> FourthRoot {
        FourthRoot::i_pow(self.0 as i64 * n)
    }

    pub fn inv(self) -> FourthRoot {
        self.pow(-1)
    }

    /// `(re, im)` as integers.
    pub fn parts(self) -> (i64, i64) {
        match self.0 {
            0 => (1, 0),
            1 => (0, 1),
            2 => (-1, 0),
            _ => (0, -1),
        }
    }
}

impl From<Sign> for FourthRoot {
    fn from(s: Sign) -> FourthRoot {
        match s {
            Sign::Plus => FourthRoot::ONE,
            Sign::Minus => FourthRoot::MINUS_ONE,
        }
    }
}

impl Mul for FourthRoot {
    type Output = FourthRoot;
    fn mul(self, o: FourthRoot) -> FourthRoot {
        FourthRoot((self.0 + o.0) % 4)
    }
}

impl Mul<Sign> for FourthRoot {
    type Output = FourthRoot;
    fn mul(self, o: Sign) -> FourthRoot {
        self * FourthRoot::from(o)
    }
}

impl Neg for FourthRoot {
    type Output = FourthRoot;
    fn neg(self) -> FourthRoot {
        self * FourthRoot::MINUS_ONE
    }
}

impl std::iter::Product for FourthRoot {
    fn product<I: Iterator<Item = FourthRoot>>(iter: I) -> FourthRoot {
        iter.fold(FourthRoot::ONE, |a, b| a * b)
    }
}

impl fmt::Display for FourthRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["+1", "+i", "-1", "-i"][self.0 as usize])
    }
}

impl FromStr for FourthRoot {
    type Err = Error;
    fn from_str(s: &str) -> Result<FourthRoot, Error> {
        match s.trim() {
            "+1" | "1" => Ok(FourthRoot::ONE),
            "+i" | "i" => Ok(FourthRoot::I),
            "-1" => Ok(FourthRoot::MINUS_ONE),
            "-i" => Ok(FourthRoot::MINUS_I),
            other => Err(Error::Signs(format!("not a fourth root of unity: {other}"))),
        }
    }
}

impl Serialize for FourthRoot {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FourthRoot {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<FourthRoot, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Sign, D::Error> {
        match String::deserialize(d)?.trim() {
            "+1" | "1" => Ok(Sign::Plus),
            "-1" => Ok(Sign::Minus),
            other => Err(serde::de::Error::custom(format!("not a sign: {other}"))),
        }
    }
}
