//! Exact rational scalars and their text form.
//!
//! The only accepted number syntax is `p` or `p/q` with an optional leading
//! `-`, where `p` and `q` are decimal digit strings and `q` is nonzero.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

fn parse_digits(s: &str, text: &str) -> Result<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!(
            "invalid rational '{text}': expected p or p/q with decimal integers"
        )));
    }
    s.parse::<BigInt>()
        .map_err(|e| Error::Parse(format!("invalid rational '{text}': {e}")))
}

/// Parses the strict `p` / `p/q` text form.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let trimmed = text.trim();
    let (negative, body) = match trimmed.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, trimmed),
    };
    let (numer, denom) = match body.split_once('/') {
        Some((n, d)) => (parse_digits(n, text)?, parse_digits(d, text)?),
        None => (parse_digits(body, text)?, BigInt::one()),
    };
    if denom.is_zero() {
        return Err(Error::Parse(format!(
            "invalid rational '{text}': zero denominator"
        )));
    }
    let value = Rational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

/// Combined bit length of numerator and denominator; the pivot-size measure
/// used by elimination.
pub fn bit_size(q: &Rational) -> u64 {
    q.numer().bits() + q.denom().bits()
}

/// Exact square root when `q` is the square of a rational.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Least common multiple of the denominators in `values` (1 for an empty slice).
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}
