//! Helpers around the exact rational type.
//!
//! All capacities, LP data and schedule durations are [`Rational`] values
//! (arbitrary precision, always kept in lowest terms with a positive
//! denominator).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Shorthand for `p/q` with small integers.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Parses `"p/q"`, `"-p/q"` or a plain integer `"p"`.
pub fn parse_exact(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("not an exact rational: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::InvalidInput(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Parses a decimal literal such as `1.25`, `-0.5` or `3.1e-2` exactly.
pub fn parse_decimal(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("not a decimal number: {s:?}"));
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let mut value = Rational::from_integer(digits.parse::<BigInt>().map_err(|_| bad())?);
    let shift = exp - frac.len() as i32;
    let ten = int(10);
    if shift >= 0 {
        value *= num_traits::pow(ten, shift as usize);
    } else {
        value /= num_traits::pow(ten, (-shift) as usize);
    }
    Ok(if neg { -value } else { value })
}

/// Accepts either an exact rational or a decimal literal.
///
/// Returns the value and whether it came from a decimal literal.
pub fn parse_any(s: &str) -> Result<(Rational, bool)> {
    let t = s.trim();
    if t.contains('/') || (!t.contains(['.', 'e', 'E']) && !t.is_empty()) {
        parse_exact(t).map(|r| (r, false))
    } else {
        parse_decimal(t).map(|r| (r, true))
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational value of a finite float.
pub fn from_f64(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| Error::InvalidInput(format!("non-finite value {x}")))
}

/// Canonical `p/q` (or `p` when the denominator is one).
pub fn to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decimal rendering with six significant digits.
pub fn to_decimal(r: &Rational) -> String {
    format_sig(to_f64(r), 6)
}

pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{:.*}", digits.saturating_sub(1), x);
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub fn is_nonnegative(r: &Rational) -> bool {
    !r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_exact_forms() {
        assert_eq!(parse_exact("6/4").unwrap(), ratio(3, 2));
        assert_eq!(parse_exact(" -7 ").unwrap(), int(-7));
        assert_eq!(parse_exact("2/-4").unwrap(), ratio(-1, 2));
        assert!(parse_exact("1/0").is_err());
        assert!(parse_exact("x").is_err());
    }

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_decimal("1.25").unwrap(), ratio(5, 4));
        assert_eq!(parse_decimal("-0.5").unwrap(), ratio(-1, 2));
        assert_eq!(parse_decimal("3.1e-2").unwrap(), ratio(31, 1000));
        assert_eq!(parse_decimal(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse_decimal("2e3").unwrap(), int(2000));
        assert!(parse_decimal("1.2.3").is_err());
        assert!(parse_decimal(".").is_err());
    }

    #[test]
    fn parse_any_distinguishes_decimals() {
        assert_eq!(parse_any("3").unwrap(), (int(3), false));
        assert_eq!(parse_any("1/3").unwrap(), (ratio(1, 3), false));
        assert_eq!(parse_any("0.1").unwrap(), (ratio(1, 10), true));
    }

    #[test]
    fn formatting() {
        assert_eq!(to_string(&ratio(4, 2)), "2");
        assert_eq!(to_string(&ratio(2000, 1001)), "2000/1001");
        assert_eq!(to_decimal(&int(2)), "2.00000");
        assert_eq!(to_decimal(&ratio(2000, 1001)), "1.99800");
        assert_eq!(format_sig(10.05528, 6), "10.0553");
    }

    #[test]
    fn lcm_ignores_integers() {
        let vals = [ratio(1, 2), ratio(2, 3), int(0), int(1)];
        assert_eq!(lcm_of_denominators(&vals), BigInt::from(6));
    }
}
