//! Exact rationals and their `"num/den"` text form.
//!
//! `Rational` is `num_rational::BigRational`, which keeps itself in lowest
//! terms with a positive denominator after every operation.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Builds `num/den`. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    Rational::from_str(text.trim()).map_err(|e| Error::Parse(format!("rational {text:?}: {e}")))
}

/// Canonical text form; integers are written without the `/1`.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

/// Least common multiple of the denominators, i.e. the smallest positive
/// integer that clears every fraction in `values`.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Sign of a rational as -1, 0 or +1.
pub fn signum(value: &Rational) -> i8 {
    if value.is_zero() {
        0
    } else if value.is_positive() {
        1
    } else {
        -1
    }
}

/// `#[serde(with = "...")]` adapter for a single rational.
pub mod serde_rational {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// `#[serde(with = "...")]` adapter for an optional rational (`null` when absent).
pub mod serde_rational_opt {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(value: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match value {
            Some(v) => s.serialize_some(&format_rational(v)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|t| parse_rational(&t).map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// `#[serde(with = "...")]` adapter for a list of rationals.
pub mod serde_rational_vec {
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(values: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&format_rational(v))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts
            .iter()
            .map(|t| parse_rational(t).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("6/8").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("5").unwrap(), int(5));
        assert_eq!(parse_rational(" -7/3 ").unwrap(), rat(-7, 3));
        assert_eq!(format_rational(&rat(10, 4)), "5/2");
        assert_eq!(format_rational(&rat(-10, 5)), "-2");
        assert_eq!(format_rational(&rat(3, -4)), "-3/4");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn lcm_of_denominators() {
        let vals = [rat(1, 4), rat(5, 6), int(3)];
        assert_eq!(common_denominator(&vals), BigInt::from(12));
    }

    proptest! {
        #[test]
        fn addition_matches_cross_multiplication(
            a in -10_000i64..10_000, b in 1i64..10_000,
            c in -10_000i64..10_000, d in 1i64..10_000,
        ) {
            let sum = rat(a, b) + rat(c, d);
            // (a*d + c*b) / (b*d), reduced independently
            let num = BigInt::from(a) * d + BigInt::from(c) * b;
            let den = BigInt::from(b) * d;
            let g = num.gcd(&den);
            prop_assert_eq!(sum.numer(), &(&num / &g));
            prop_assert_eq!(sum.denom(), &(&den / &g));
            prop_assert!(sum.denom().is_positive());
        }

        #[test]
        fn text_form_round_trips(a in any::<i64>(), b in 1i64..i64::MAX) {
            let v = rat(a, b);
            prop_assert_eq!(parse_rational(&format_rational(&v)).unwrap(), v);
        }
    }
}
