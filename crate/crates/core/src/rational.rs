//! Exact rationals and their `p/q` text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

/// `p/q` as an exact rational. Panics if `q == 0`.
pub fn q(p: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(d))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed rational {0:?} (expected p or p/q)")]
pub struct RationalParseError(pub String);

/// Parses `p` or `p/q` with optional sign on `p`.
pub fn parse_rational(s: &str) -> Result<Rational, RationalParseError> {
    let err = || RationalParseError(s.to_string());
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

/// Canonical `p/q` text; integers keep the `/1`.
pub fn fmt_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Nearest `f64`, for drawing only.
pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        assert_eq!(parse_rational("-6/4").unwrap(), q(-3, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(fmt_rational(&q(6, -4)), "-3/2");
        assert_eq!(fmt_rational(&int(0)), "0/1");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x/2").is_err());
        for s in ["-3/2", "0/1", "17/5"] {
            assert_eq!(fmt_rational(&parse_rational(s).unwrap()), s);
        }
    }
}
