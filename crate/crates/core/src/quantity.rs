use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A bound-side value: either an exact integer or a decimal rendering of a
/// real computed at high precision. Both serialise as decimal strings; an
/// approximate value always contains a decimal point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Quantity {
    Exact(BigInt),
    Approx(String),
}

impl Quantity {
    pub fn as_exact(&self) -> Option<&BigInt> {
        match self {
            Quantity::Exact(v) => Some(v),
            Quantity::Approx(_) => None,
        }
    }
}

impl From<BigInt> for Quantity {
    fn from(v: BigInt) -> Self {
        Quantity::Exact(v)
    }
}

impl From<BigUint> for Quantity {
    fn from(v: BigUint) -> Self {
        Quantity::Exact(v.into())
    }
}

impl From<i64> for Quantity {
    fn from(v: i64) -> Self {
        Quantity::Exact(v.into())
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Exact(v) => write!(f, "{v}"),
            Quantity::Approx(s) => f.write_str(s),
        }
    }
}

impl FromStr for Quantity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.contains('.') {
            Ok(Quantity::Approx(s.to_string()))
        } else {
            s.parse::<BigInt>()
                .map(Quantity::Exact)
                .map_err(|e| format!("bad integer '{s}': {e}"))
        }
    }
}

impl Serialize for Quantity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Quantity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Serde adapter writing a [`BigUint`] as a decimal string.
pub mod biguint_string {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
