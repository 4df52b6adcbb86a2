//! Exact rational helpers and the `"p/q"` text form used on the command line
//! and in JSON reports.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `num / den` as a reduced rational. Panics on `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Parses `"p/q"` or `"p"`. The sign may only appear on the numerator and the
/// denominator must be positive.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Domain(format!("invalid rational literal {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = match den {
        Some(d) => {
            if d.starts_with(['-', '+']) {
                return Err(bad());
            }
            BigInt::from_str(d).map_err(|_| bad())?
        }
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(Error::Domain(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Canonical text form: reduced, `q` omitted when 1, sign on the numerator.
/// `Σ num_i / den_i` over a running product denominator, reduced once at
/// the end. Cheaper than repeated [`Rational`] additions for short sums.
pub fn fraction_sum(terms: impl IntoIterator<Item = (BigInt, BigInt)>) -> Rational {
    let (mut num, mut den) = (BigInt::zero(), BigInt::one());
    for (n, d) in terms {
        num = num * &d + n * &den;
        den *= d;
    }
    Rational::new(num, den)
}

pub fn fmt_rational(r: &Rational) -> String {
    r.to_string()
}

/// Parses a comma-separated list of rationals, e.g. `"1/2,3"`.
pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>> {
    s.split(',').map(parse_rational).collect()
}

/// Least common multiple of the denominators of `values`.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, v| {
        num_integer::Integer::lcm(&acc, v.denom())
    })
}

pub fn is_positive_integer(r: &Rational) -> bool {
    r.is_integer() && r.is_positive()
}

/// Serde adapter writing a rational as its `"p/q"` string.
pub mod as_string {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for a vector of rationals as an array of `"p/q"` strings.
pub mod vec_as_strings {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(fmt_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_formats_canonically() {
        assert_eq!(parse_rational("7/2").unwrap(), rat(7, 2));
        assert_eq!(parse_rational("-3").unwrap(), int(-3));
        assert_eq!(parse_rational("4/8").unwrap(), rat(1, 2));
        assert_eq!(fmt_rational(&rat(-6, 4)), "-3/2");
        assert_eq!(fmt_rational(&rat(6, 3)), "2");
    }

    #[test]
    fn rejects_malformed_literals() {
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1/-2").is_err());
        assert!(parse_rational("a/b").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn lcm_of_denominators() {
        let v = [rat(1, 4), rat(5, 6), int(3)];
        assert_eq!(common_denominator(&v), BigInt::from(12));
    }
}
