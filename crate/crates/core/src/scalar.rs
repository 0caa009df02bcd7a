//! Exact rational scalars.
//!
//! Every coefficient, norm and ratio in the crate is a [`Scalar`]. The textual
//! form is `p/q` (or `p` when the denominator is one), which is also the form
//! used in every JSON document.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Arbitrary-precision rational number.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(numer: i64, denom: i64) -> Scalar {
    Scalar::new(BigInt::from(numer), BigInt::from(denom))
}

/// `base^exp` for a non-negative integer exponent.
pub fn pow(base: &Scalar, exp: u32) -> Scalar {
    let mut acc = Scalar::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Parses `p/q`, `p`, or a finite decimal such as `-1.25`.
pub fn parse(text: &str) -> Result<Scalar, Error> {
    let t = text.trim();
    let bad = || Error::Parse(format!("not an exact rational: {text:?}"));
    if let Some((whole, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole: BigInt = if whole.is_empty() || whole == "-" {
            BigInt::zero()
        } else {
            whole.parse().map_err(|_| bad())?
        };
        let digits: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mut value = Scalar::from_integer(whole.abs()) + Scalar::new(digits, scale);
        if negative {
            value = -value;
        }
        return Ok(value);
    }
    let value: Scalar = t.parse().map_err(|_| bad())?;
    Ok(value)
}

/// Reads a scalar from a JSON number or string.
pub fn from_json(value: &serde_json::Value) -> Result<Scalar, Error> {
    match value {
        serde_json::Value::String(s) => parse(s),
        serde_json::Value::Number(n) => parse(&n.to_string()),
        other => Err(Error::Parse(format!("expected a rational, got {other}"))),
    }
}

pub fn to_json(value: &Scalar) -> serde_json::Value {
    serde_json::Value::String(value.to_string())
}

/// Decimal rendering with `places` digits after the point, truncated toward zero.
pub fn decimal(value: &Scalar, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), places);
    let scaled = (value * Scalar::from_integer(scale.clone())).trunc().to_integer();
    let negative = scaled.is_negative() || (scaled.is_zero() && value.is_negative());
    let digits = scaled.abs().to_string();
    let digits = format!("{digits:0>width$}", width = places + 1);
    let (int_part, frac_part) = digits.split_at(digits.len() - places);
    let sign = if negative { "-" } else { "" };
    if places == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

pub fn to_f64(value: &Scalar) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_integers_and_decimals() {
        assert_eq!(parse("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse("-7").unwrap(), int(-7));
        assert_eq!(parse("1.25").unwrap(), ratio(5, 4));
        assert_eq!(parse("-0.5").unwrap(), ratio(-1, 2));
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
        assert!(parse("1.").is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal(&ratio(2, 3), 4), "0.6666");
        assert_eq!(decimal(&ratio(-9, 4), 2), "-2.25");
        assert_eq!(decimal(&int(27), 0), "27");
        assert_eq!(decimal(&ratio(-1, 8), 2), "-0.12");
    }

    #[test]
    fn display_is_fraction_string() {
        assert_eq!(ratio(9, 4).to_string(), "9/4");
        assert_eq!(int(3).to_string(), "3");
        assert_eq!(pow(&ratio(3, 2), 2), ratio(9, 4));
    }
}
