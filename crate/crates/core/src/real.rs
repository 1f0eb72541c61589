//! Real parameters: exact rationals or binary floating point.

use std::fmt;

use num_rational::Ratio;
use num_traits::ToPrimitive;

pub type Q = Ratio<i64>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Real {
    Rational(Q),
    Float(f64),
}

impl Real {
    pub fn ratio(n: i64, d: i64) -> Real {
        Real::Rational(Q::new(n, d))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Rational(q) => q.to_f64().unwrap_or(f64::NAN),
            Real::Float(x) => *x,
        }
    }

    pub fn as_rational(&self) -> Option<Q> {
        match self {
            Real::Rational(q) => Some(*q),
            Real::Float(_) => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Real::Rational(_) => true,
            Real::Float(x) => x.is_finite(),
        }
    }
}

impl From<f64> for Real {
    fn from(x: f64) -> Self {
        Real::Float(x)
    }
}

impl From<Q> for Real {
    fn from(q: Q) -> Self {
        Real::Rational(q)
    }
}

/// Rationals print as `p/q` (or `p` when integral); floats always carry a
/// decimal point so they read back as floats.
impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Rational(q) if *q.denom() == 1 => write!(f, "{}", q.numer()),
            Real::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Real::Float(x) => {
                let s = x.to_string();
                if s.contains('.') {
                    f.write_str(&s)
                } else {
                    write!(f, "{s}.0")
                }
            }
        }
    }
}

/// `"p/q"`, always with an explicit denominator.
pub fn fmt_q(q: &Q) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_q(s: &str) -> Option<Q> {
    let (a, b) = s.split_once('/')?;
    let n: i64 = a.trim().parse().ok()?;
    let d: i64 = b.trim().parse().ok()?;
    (d != 0).then(|| Q::new(n, d))
}

pub(crate) mod serde_q {
    use super::{fmt_q, parse_q, Q};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}")))
    }
}

pub(crate) mod serde_opt_q {
    use super::{fmt_q, parse_q, Q};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_str(&fmt_q(q)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
        match Option::<String>::deserialize(d)? {
            None => Ok(None),
            Some(s) => parse_q(&s)
                .map(Some)
                .ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}"))),
        }
    }
}
