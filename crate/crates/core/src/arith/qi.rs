use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{FourthRoot, Rational, Sign};
use crate::error::Error;

/// An element `a + b i` of `Q(i)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Qi {
    pub re: Rational,
    pub im: Rational,
}

impl Qi {
    pub fn new(re: Rational, im: Rational) -> Qi {
        Qi { re, im }
    }

    pub fn real(re: Rational) -> Qi {
        Qi { re, im: Rational::zero() }
    }

    pub fn zero() -> Qi {
        Qi::real(Rational::zero())
    }

    pub fn one() -> Qi {
        Qi::real(Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn scale(&self, z: FourthRoot) -> Qi {
        let (a, b) = z.parts();
        let (a, b) = (Rational::from_int(a), Rational::from_int(b));
        Qi { re: &(&self.re * &a) - &(&self.im * &b), im: &(&self.re * &b) + &(&self.im * &a) }
    }

    pub fn signed(&self, s: Sign) -> Qi {
        self.scale(s.into())
    }
}

impl From<FourthRoot> for Qi {
    fn from(z: FourthRoot) -> Qi {
        Qi::one().scale(z)
    }
}

impl Add for Qi {
    type Output = Qi;
    fn add(self, o: Qi) -> Qi {
        Qi { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Sub for Qi {
    type Output = Qi;
    fn sub(self, o: Qi) -> Qi {
        Qi { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Neg for Qi {
    type Output = Qi;
    fn neg(self) -> Qi {
        Qi { re: -self.re, im: -self.im }
    }
}

impl Mul for Qi {
    type Output = Qi;
    fn mul(self, o: Qi) -> Qi {
        Qi {
            re: &(&self.re * &o.re) - &(&self.im * &o.im),
            im: &(&self.re * &o.im) + &(&self.im * &o.re),
        }
    }
}

impl std::iter::Sum for Qi {
    fn sum<I: Iterator<Item = Qi>>(iter: I) -> Qi {
        iter.fold(Qi::zero(), |a, b| a + b)
    }
}

impl fmt::Display for Qi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{} i", self.im),
            (false, false) => {
                if self.im.is_negative() {
                    write!(f, "{} - {} i", self.re, self.im.abs())
                } else {
                    write!(f, "{} + {} i", self.re, self.im)
                }
            }
        }
    }
}

impl fmt::Debug for Qi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Qi {
    type Err = Error;

    /// Accepts `a`, `b i`, `a + b i`, `a - b i`, `i`, `-i`.
    fn from_str(s: &str) -> Result<Qi, Error> {
        let bad = || Error::ParseRational(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(bad());
        }
        // split at a sign that is not the leading character and not inside "n/d"
        let split = t
            .char_indices()
            .skip(1)
            .filter(|(_, c)| *c == '+' || *c == '-')
            .map(|(i, _)| i)
            .last();
        let (a, b) = match split {
            Some(i) if t.ends_with('i') => (&t[..i], &t[i..]),
            _ => {
                if t.ends_with('i') {
                    ("0", t.as_str())
                } else {
                    (t.as_str(), "0i")
                }
            }
        };
        let im_str = b.strip_suffix('i').ok_or_else(bad)?;
        let im = match im_str {
            "" | "+" => Rational::one(),
            "-" => -Rational::one(),
            other => other.trim_start_matches('+').parse().map_err(|_| bad())?,
        };
        let re = a.parse().map_err(|_| bad())?;
        Ok(Qi { re, im })
    }
}

impl Serialize for Qi {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Qi {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Qi, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}
