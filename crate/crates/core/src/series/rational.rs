//! Exact rationals and their canonical `"num/den"` string form.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};

use super::SeriesError;

/// Arbitrary-precision rational, always reduced with a positive denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical string: always `num/den`, e.g. `"3/1"`, `"-1/2"`.
pub fn to_canonical(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `"num/den"` or a bare integer. Non-reduced input and
/// non-positive denominators are rejected rather than normalized.
pub fn parse_canonical(s: &str) -> Result<Rational, SeriesError> {
    let s = s.trim();
    let bad = || SeriesError::Parse(format!("invalid rational `{s}`"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (
            n.trim().parse::<BigInt>().map_err(|_| bad())?,
            d.trim().parse::<BigInt>().map_err(|_| bad())?,
        ),
        None => (s.parse::<BigInt>().map_err(|_| bad())?, BigInt::one()),
    };
    if !den.is_positive() {
        return Err(SeriesError::Parse(format!(
            "rational `{s}` must have a positive denominator"
        )));
    }
    if !num.gcd(&den).is_one() && !(num.is_zero() && den.is_one()) {
        return Err(SeriesError::Parse(format!(
            "rational `{s}` is not in lowest terms"
        )));
    }
    Ok(Rational::new_raw(num, den))
}

/// Human-facing form: integers without a denominator.
pub fn to_display(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Generalized binomial coefficient `top choose k` for any integer `top`.
pub fn binomial(top: i64, k: u64) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k as i64 {
        num *= BigInt::from(top - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

pub(crate) mod serde_str {
    use super::{parse_canonical, to_canonical, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&to_canonical(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let raw = String::deserialize(d)?;
        parse_canonical(&raw).map_err(serde::de::Error::custom)
    }
}
