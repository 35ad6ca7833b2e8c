//! Exact rational scalars and their `"p/q"` text form.
//!
//! Every cost, share and approximation ratio in the crate is a [`Rational`]
//! (an arbitrary-precision, always-reduced fraction). Floats only appear in
//! convenience columns of CSV reports.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`. Denominators must be non-zero.
pub fn parse(s: &str) -> Result<Rational> {
    let bad = || Error::MalformedRational(s.to_string());
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Canonical `"p/q"` form; the denominator is always printed.
pub fn format(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn sum<'a>(it: impl IntoIterator<Item = &'a Rational>) -> Rational {
    it.into_iter().fold(Rational::zero(), |acc, x| acc + x)
}

/// Least common multiple of the denominators, so that `row * scale` is integral.
pub fn common_denominator<'a>(it: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    it.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Scales a row of rationals to integers sharing one denominator.
pub fn scale_to_integers(row: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let d = common_denominator(row);
    let ints = row
        .iter()
        .map(|x| (x * Rational::from_integer(d.clone())).to_integer())
        .collect();
    (ints, d)
}

/// An approximation ratio: a finite rational or the "no finite α" marker.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Alpha {
    Finite(Rational),
    Infinite,
}

impl Alpha {
    pub fn zero() -> Self {
        Alpha::Finite(Rational::zero())
    }

    /// `residual / share`, with `0/0 = 0` and `positive/0 = ∞`.
    pub fn ratio(residual: &Rational, share: &Rational) -> Self {
        if share.is_positive() {
            Alpha::Finite(residual / share)
        } else if residual.is_positive() {
            Alpha::Infinite
        } else {
            Alpha::zero()
        }
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Alpha::Finite(r) => Some(r),
            Alpha::Infinite => None,
        }
    }

    pub fn le(&self, bound: &Rational) -> bool {
        matches!(self, Alpha::Finite(r) if r <= bound)
    }
}

impl Ord for Alpha {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Alpha::Finite(a), Alpha::Finite(b)) => a.cmp(b),
            (Alpha::Finite(_), Alpha::Infinite) => Ordering::Less,
            (Alpha::Infinite, Alpha::Finite(_)) => Ordering::Greater,
            (Alpha::Infinite, Alpha::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Alpha {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alpha::Finite(r) => f.write_str(&format(r)),
            Alpha::Infinite => f.write_str("inf"),
        }
    }
}

/// Infinite ratios serialize as `null`.
impl Serialize for Alpha {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Alpha::Finite(r) => s.serialize_str(&format(r)),
            Alpha::Infinite => s.serialize_none(),
        }
    }
}

impl<'de> Deserialize<'de> for Alpha {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Option<RationalText> = Option::deserialize(d)?;
        Ok(match v {
            Some(RationalText(r)) => Alpha::Finite(r),
            None => Alpha::Infinite,
        })
    }
}

/// Wire form of a rational: a `"p/q"` string or a JSON integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalText(pub Rational);

impl Serialize for RationalText {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format(&self.0))
    }
}

impl<'de> Deserialize<'de> for RationalText {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(RationalText(int(v))),
            Raw::Text(s) => parse(&s)
                .map(RationalText)
                .map_err(serde::de::Error::custom),
        }
    }
}

/// `#[serde(with = "rational::text")]` for single rationals.
pub mod text {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        RationalText::deserialize(d).map(|r| r.0)
    }
}

/// `#[serde(with = "rational::text_vec")]` for rows of rationals.
pub mod text_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        Vec::<RationalText>::deserialize(d).map(|v| v.into_iter().map(|r| r.0).collect())
    }
}

/// `#[serde(with = "rational::text_opt")]` for optional rationals.
pub mod text_opt {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(r) => s.serialize_str(&format(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Rational>, D::Error> {
        Option::<RationalText>::deserialize(d).map(|v| v.map(|r| r.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse("3/10").unwrap(), frac(3, 10));
        assert_eq!(parse("6/20").unwrap(), frac(3, 10));
        assert_eq!(parse(" 4 ").unwrap(), int(4));
        assert_eq!(parse("-1/2").unwrap(), frac(-1, 2));
        assert!(matches!(parse("1/0"), Err(Error::MalformedRational(_))));
        assert!(matches!(parse("0.5"), Err(Error::MalformedRational(_))));
        assert!(matches!(parse(""), Err(Error::MalformedRational(_))));
    }

    #[test]
    fn formats_reduced_with_denominator() {
        assert_eq!(format(&frac(6, 20)), "3/10");
        assert_eq!(format(&int(1)), "1/1");
    }

    #[test]
    fn alpha_ordering_and_zero_shares() {
        assert_eq!(Alpha::ratio(&frac(1, 2), &int(0)), Alpha::Infinite);
        assert_eq!(Alpha::ratio(&int(0), &int(0)), Alpha::zero());
        assert!(Alpha::Infinite > Alpha::Finite(int(1000)));
        assert!(Alpha::Finite(frac(4, 5)).le(&int(1)));
        assert!(!Alpha::Infinite.le(&int(1)));
    }

    #[test]
    fn scaling_row_to_integers() {
        let (ints, d) = scale_to_integers(&[frac(2, 5), frac(3, 10), frac(1, 5), frac(1, 10)]);
        assert_eq!(d, BigInt::from(10));
        let want: Vec<BigInt> = [4, 3, 2, 1].into_iter().map(BigInt::from).collect();
        assert_eq!(ints, want);
    }
}
