//! Nonnegative rationals extended with `∞`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A distance: an exact nonnegative rational, or infinity.
///
/// `Fin` sorts before `Inf`, so the derived order is the usual order on
/// `[0, ∞]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dist {
    Fin(Rational64),
    Inf,
}

impl Dist {
    pub const ZERO: Dist = Dist::Fin(Rational64::new_raw(0, 1));

    pub fn int(n: i64) -> Dist {
        Dist::Fin(Rational64::from_integer(n))
    }

    pub fn ratio(num: i64, den: i64) -> Dist {
        Dist::Fin(Rational64::new(num, den))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Dist::Fin(r) if r.is_zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Dist::Fin(_))
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, Dist::Fin(r) if r.is_negative())
    }

    pub fn max(self, other: Dist) -> Dist {
        std::cmp::max(self, other)
    }

    pub fn min(self, other: Dist) -> Dist {
        std::cmp::min(self, other)
    }
}

impl Add for Dist {
    type Output = Dist;

    fn add(self, rhs: Dist) -> Dist {
        match (self, rhs) {
            (Dist::Fin(a), Dist::Fin(b)) => Dist::Fin(a + b),
            _ => Dist::Inf,
        }
    }
}

impl Default for Dist {
    fn default() -> Self {
        Dist::ZERO
    }
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dist::Inf => write!(f, "inf"),
            Dist::Fin(r) if *r.denom() == 1 => write!(f, "{}", r.numer()),
            Dist::Fin(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed distance `{0}` (expected `p`, `p/q` or `inf`)")]
pub struct DistParseError(pub String);

impl FromStr for Dist {
    type Err = DistParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "inf" || t == "∞" {
            return Ok(Dist::Inf);
        }
        let bad = || DistParseError(s.to_string());
        let r = match t.split_once('/') {
            Some((p, q)) => {
                let p: i64 = p.trim().parse().map_err(|_| bad())?;
                let q: i64 = q.trim().parse().map_err(|_| bad())?;
                if q == 0 {
                    return Err(bad());
                }
                Rational64::new(p, q)
            }
            None => Rational64::from_integer(t.parse().map_err(|_| bad())?),
        };
        Ok(Dist::Fin(r))
    }
}

impl Serialize for Dist {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Dist {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(Dist::int(n)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Compare a derived bound against a required one: `self ≤ bound`.
pub fn within(value: Dist, bound: Dist) -> bool {
    value.cmp(&bound) != Ordering::Greater
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_absorbs() {
        assert_eq!(Dist::int(1) + Dist::Inf, Dist::Inf);
        assert_eq!(Dist::ratio(1, 2) + Dist::ratio(1, 2), Dist::int(1));
        assert!(Dist::int(1_000_000) < Dist::Inf);
    }

    #[test]
    fn parse_and_print() {
        for s in ["0", "3", "1/2", "inf", "7/3"] {
            let d: Dist = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
        }
        assert_eq!("2/4".parse::<Dist>().unwrap(), Dist::ratio(1, 2));
        assert!("1/0".parse::<Dist>().is_err());
        assert!("x".parse::<Dist>().is_err());
    }
}
