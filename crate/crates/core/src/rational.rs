//! Helpers around [`rug::Rational`]: the `"p/q"` text form used by every file
//! format, exact decimal rendering, and a few small constructors.

use std::str::FromStr;

use rug::ops::Pow;
use rug::{Integer, Rational};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid rational literal {0:?} (expected \"p/q\" or an integer)")]
pub struct ParseRationalError(pub String);

/// Parses `"p/q"`, `"-p/q"` or a bare integer. Whitespace around the parts is
/// ignored; a zero denominator is rejected.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num = Integer::from_str(num).map_err(|_| err())?;
    let den = Integer::from_str(den).map_err(|_| err())?;
    if den == 0 {
        return Err(err());
    }
    Ok(Rational::from((num, den)))
}

/// Canonical `"p/q"` text. Integers are written as `"p/1"` so that every
/// serialized value has the same shape.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Shorthand constructor, panics on a zero denominator.
pub fn ratio(p: i64, q: i64) -> Rational {
    assert!(q != 0, "zero denominator");
    Rational::from((p, q))
}

/// Decimal expansion truncated toward zero after `digits` fractional digits.
pub fn to_decimal(q: &Rational, digits: usize) -> String {
    let negative = *q < 0;
    let abs = Rational::from(q.abs_ref());
    let scale = Integer::from(10).pow(digits as u32);
    let scaled = Integer::from(abs.numer() * &scale) / abs.denom();
    let mut text = scaled.to_string();
    if digits > 0 {
        if text.len() <= digits {
            text = format!("{}{}", "0".repeat(digits + 1 - text.len()), text);
        }
        text.insert(text.len() - digits, '.');
    }
    if negative && scaled != 0 {
        text.insert(0, '-');
    }
    text
}

/// `base^exp` for a non-negative exponent.
pub fn pow(base: &Rational, exp: u32) -> Rational {
    Rational::from(base.pow(exp))
}

/// Nearest `f64` (rug's own conversion truncates).
pub fn to_f64(q: &Rational) -> f64 {
    rug::Float::with_val_round(53, q, rug::float::Round::Nearest).0.to_f64()
}

pub(crate) mod serde_rational {
    //! Serde adapter writing a [`Rational`] as its `"p/q"` string.
    use rug::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        super::parse_rational(&text).map_err(serde::de::Error::custom)
    }
}
