//! Exact non-negative rationals used for approximation ratios.

use std::fmt;

use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

/// An exact non-negative rational, e.g. `1 + eps`.
pub type Ratio = num_rational::Ratio<u64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RatioParseError {
    #[error("empty ratio")]
    Empty,
    #[error("invalid ratio `{0}`")]
    Invalid(String),
    #[error("ratio `{0}` has a zero denominator")]
    ZeroDenominator(String),
    #[error("ratio `{0}` does not fit in 64-bit integers")]
    Overflow(String),
}

/// Parses `"101"`, `"1.1"` or `"11/10"` into an exact ratio.
pub fn parse_ratio(text: &str) -> Result<Ratio, RatioParseError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(RatioParseError::Empty);
    }
    let invalid = || RatioParseError::Invalid(text.to_string());
    let overflow = || RatioParseError::Overflow(text.to_string());
    let digits = |s: &str| -> Result<u64, RatioParseError> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(invalid());
        }
        s.parse::<u64>().map_err(|_| overflow())
    };

    if let Some((num, den)) = text.split_once('/') {
        let num = digits(num.trim())?;
        let den = digits(den.trim())?;
        if den == 0 {
            return Err(RatioParseError::ZeroDenominator(text.to_string()));
        }
        return Ok(Ratio::new(num, den));
    }
    if let Some((int, frac)) = text.split_once('.') {
        let int = if int.is_empty() { 0 } else { digits(int)? };
        if frac.is_empty() {
            return Ok(Ratio::from_integer(int));
        }
        let frac_val = digits(frac)?;
        let scale = 10u64
            .checked_pow(u32::try_from(frac.len()).map_err(|_| overflow())?)
            .ok_or_else(overflow)?;
        let num = int
            .checked_mul(scale)
            .and_then(|v| v.checked_add(frac_val))
            .ok_or_else(overflow)?;
        return Ok(Ratio::new(num, scale));
    }
    Ok(Ratio::from_integer(digits(text)?))
}

/// `floor(r * v)` in exact integer arithmetic.
pub fn floor_mul(r: &Ratio, v: u64) -> u64 {
    let prod = u128::from(*r.numer()) * u128::from(v) / u128::from(*r.denom());
    u64::try_from(prod).unwrap_or(u64::MAX)
}

/// `ceil(v / r)` for a strictly positive ratio.
pub fn ceil_div(v: u64, r: &Ratio) -> u64 {
    assert!(!r.is_zero(), "division by a zero ratio");
    let num = u128::from(v) * u128::from(*r.denom());
    let den = u128::from(*r.numer());
    u64::try_from(num.div_ceil(den)).unwrap_or(u64::MAX)
}

pub fn to_f64(r: &Ratio) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Formats as `n` or `n/d`; [`parse_ratio`] reads the output back.
pub fn format_ratio(r: &Ratio) -> String {
    Display(r).to_string()
}

struct Display<'a>(&'a Ratio);

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self.0.denom() == 1 {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

/// Serde adapter storing ratios as `"n/d"` strings.
pub mod serde_string {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_ratio, parse_ratio, Ratio};

    pub fn serialize<S: Serializer>(r: &Ratio, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_ratio(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Ratio, D::Error> {
        let text = String::deserialize(d)?;
        parse_ratio(&text).map_err(serde::de::Error::custom)
    }

    pub mod option {
        use serde::{Deserialize, Deserializer, Serializer};

        use super::super::{format_ratio, parse_ratio, Ratio};

        pub fn serialize<S: Serializer>(r: &Option<Ratio>, s: S) -> Result<S::Ok, S::Error> {
            match r {
                Some(r) => s.serialize_some(&format_ratio(r)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Ratio>, D::Error> {
            let text = Option::<String>::deserialize(d)?;
            text.map(|t| parse_ratio(&t).map_err(serde::de::Error::custom))
                .transpose()
        }
    }
}
