//! Exact rational scalars.
//!
//! Every quantity in this crate is an arbitrary-precision rational; there is
//! no floating point anywhere below the SVG renderer.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Reduced fraction with positive denominator.
pub type Rational = BigRational;

/// `num / den` as a rational. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`. Decimal and exponent notation are rejected so
/// that no float ever leaks into exact data.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::InvalidRational(text.to_string());
    let trimmed = text.trim();
    let (num, den) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (trimmed, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

pub(crate) fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `Σ weight · vector` over equally long vectors.
pub(crate) fn combine(terms: &[(Rational, &[Rational])]) -> Vec<Rational> {
    let len = terms.first().map_or(0, |(_, v)| v.len());
    let mut out = vec![Rational::zero(); len];
    for (w, v) in terms {
        for (o, x) in out.iter_mut().zip(v.iter()) {
            *o += w * x;
        }
    }
    out
}

pub(crate) fn max_abs(values: &[Rational]) -> Rational {
    values
        .iter()
        .map(|v| v.abs())
        .max()
        .unwrap_or_else(Rational::zero)
}

pub(crate) fn half() -> Rational {
    Rational::one() / int(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("3/4").unwrap(), ratio(3, 4));
        assert_eq!(parse_rational("-6/8").unwrap(), ratio(-3, 4));
        assert_eq!(parse_rational("5").unwrap(), int(5));
        assert_eq!(parse_rational(" 2 / -4 ").unwrap(), ratio(-1, 2));
    }

    #[test]
    fn rejects_floats_and_zero_denominators() {
        for bad in ["0.5", "1e3", "1/0", "", "abc", "1/2/3"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn display_is_canonical() {
        assert_eq!(ratio(6, -8).to_string(), "-3/4");
        assert_eq!(ratio(4, 2).to_string(), "2");
    }
}
