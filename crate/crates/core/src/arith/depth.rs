use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Rational;
use crate::error::{Error, Result};

/// A point of the extended line `Q ⊔ Q+`, or `+∞`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Depth {
    Finite { value: Rational, plus: bool },
    Infinity,
}

impl Depth {
    pub fn at(value: Rational) -> Depth {
        Depth::Finite { value, plus: false }
    }

    pub fn int(n: i64) -> Depth {
        Depth::at(Rational::from_int(n))
    }

    pub fn just_above(value: Rational) -> Depth {
        Depth::Finite { value, plus: true }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Depth::Finite { .. })
    }

    pub fn is_plus(&self) -> bool {
        matches!(self, Depth::Finite { plus: true, .. })
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            Depth::Finite { value, .. } => Some(value),
            Depth::Infinity => None,
        }
    }

    /// `r ↦ r+`; leaves `r+` and `∞` fixed.
    pub fn plus(&self) -> Depth {
        match self {
            Depth::Finite { value, .. } => Depth::just_above(value.clone()),
            Depth::Infinity => Depth::Infinity,
        }
    }

    /// The order-reversing involution `r ↦ (-r)+`, `r+ ↦ -r`.
    pub fn tilde(&self) -> Result<Depth> {
        match self {
            Depth::Finite { value, plus: false } => Ok(Depth::just_above(-value)),
            Depth::Finite { value, plus: true } => Ok(Depth::at(-value)),
            Depth::Infinity => Err(Error::TildeOfInfinity),
        }
    }

    /// Shift a finite depth by a rational.
    pub fn shift(&self, by: &Rational) -> Depth {
        match self {
            Depth::Finite { value, plus } => Depth::Finite { value: value + by, plus: *plus },
            Depth::Infinity => Depth::Infinity,
        }
    }
}

impl Ord for Depth {
    fn cmp(&self, other: &Depth) -> Ordering {
        match (self, other) {
            (Depth::Infinity, Depth::Infinity) => Ordering::Equal,
            (Depth::Infinity, _) => Ordering::Greater,
            (_, Depth::Infinity) => Ordering::Less,
            (Depth::Finite { value: a, plus: p }, Depth::Finite { value: b, plus: q }) => {
                a.cmp(b).then(p.cmp(q))
            }
        }
    }
}

impl PartialOrd for Depth {
    fn partial_cmp(&self, other: &Depth) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Depth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Depth::Finite { value, plus } => write!(f, "{}{}", value, if *plus { "+" } else { "" }),
            Depth::Infinity => write!(f, "inf"),
        }
    }
}

impl fmt::Debug for Depth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Depth {
    type Err = Error;

    fn from_str(s: &str) -> Result<Depth> {
        let t = s.trim();
        if t == "inf" || t == "+inf" || t == "∞" {
            return Ok(Depth::Infinity);
        }
        let (body, plus) = match t.strip_suffix('+') {
            Some(b) => (b, true),
            None => (t, false),
        };
        let value = body.parse().map_err(|_| Error::ParseDepth(s.to_string()))?;
        Ok(Depth::Finite { value, plus })
    }
}

impl Serialize for Depth {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Depth {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Depth, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(s: &str) -> Depth {
        s.parse().unwrap()
    }

    #[test]
    fn tilde_examples() {
        assert_eq!(d("0").tilde().unwrap(), d("0+"));
        assert_eq!(d("3/2+").tilde().unwrap(), d("-3/2"));
        assert_eq!(d("-7/3").tilde().unwrap().tilde().unwrap(), d("-7/3"));
        assert_eq!(Depth::Infinity.tilde(), Err(Error::TildeOfInfinity));
    }

    #[test]
    fn order() {
        assert!(d("1") < d("1+"));
        assert!(d("1+") < d("3/2"));
        assert!(d("100+") < Depth::Infinity);
    }

    fn depth() -> impl Strategy<Value = Depth> {
        (-50i64..50, 1i64..7, any::<bool>())
            .prop_map(|(n, q, plus)| Depth::Finite { value: Rational::new(n, q), plus })
    }

    proptest! {
        #[test]
        fn tilde_reverses_order(a in depth(), b in depth()) {
            let (ta, tb) = (a.tilde().unwrap(), b.tilde().unwrap());
            prop_assert_eq!(a.cmp(&b), tb.cmp(&ta));
            prop_assert_eq!(ta.tilde().unwrap(), a);
        }

        #[test]
        fn parse_roundtrip(a in depth()) {
            prop_assert_eq!(a.to_string().parse::<Depth>().unwrap(), a);
        }
    }
}
