//! Reals extended by `+inf`, with an explicit tag instead of a sentinel float.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    PosInfinity,
}

impl ExtReal {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(v),
            ExtReal::PosInfinity => None,
        }
    }

    /// Lossy view as `f64`, mapping `+inf` to `f64::INFINITY`.
    pub fn to_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }

    pub fn from_f64(v: f64) -> Self {
        if v == f64::INFINITY {
            ExtReal::PosInfinity
        } else {
            ExtReal::Finite(v)
        }
    }

    pub fn offset(self, v: f64) -> Self {
        match self {
            ExtReal::Finite(x) => ExtReal::Finite(x + v),
            ExtReal::PosInfinity => ExtReal::PosInfinity,
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(v) => write!(f, "{v}"),
            ExtReal::PosInfinity => write!(f, "inf"),
        }
    }
}

/// Finite values serialize as JSON numbers, `+inf` as the string `"inf"`.
impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtReal::Finite(v) => serializer.serialize_f64(*v),
            ExtReal::PosInfinity => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Num(v) => Ok(ExtReal::Finite(v)),
            Repr::Str(s) if s == "inf" => Ok(ExtReal::PosInfinity),
            Repr::Str(s) => Err(D::Error::custom(format!("expected number or \"inf\", got {s:?}"))),
        }
    }
}
