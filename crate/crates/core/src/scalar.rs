//! Exact rational scalars.
//!
//! Every coefficient in the crate is a `Scalar`, an arbitrary-precision
//! rational kept in lowest terms with a positive denominator (both are
//! maintained by `num-rational`). No floating point appears anywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

pub type Scalar = BigRational;

/// Integer scalar.
pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

/// Rational scalar n/d. Panics on d = 0; intended for literals.
pub fn rat(n: i64, d: i64) -> Scalar {
    assert!(d != 0, "zero denominator");
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parse "p" or "p/q" with optional leading sign. Rejects q = 0.
pub fn parse_rational(s: &str) -> Result<Scalar, Error> {
    let t = s.trim();
    let bad = || Error::InvalidRational(s.to_string());
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = match den {
        Some(d) => d.parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Render as "p" or "p/q" in lowest terms.
pub fn format_rational(s: &Scalar) -> String {
    if s.denom().is_one() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

pub fn is_negative(s: &Scalar) -> bool {
    s.is_negative()
}

/// Whether the scalar is an integer >= 0 (e.g. the integrability test
/// c - lambda in Z_+).
pub fn is_nonnegative_integer(s: &Scalar) -> bool {
    !s.is_negative() && s.denom().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "1", "-3", "5/2", "-7/3"] {
            let v = parse_rational(s).unwrap();
            assert_eq!(format_rational(&v), s);
        }
        // non-lowest terms normalize
        assert_eq!(format_rational(&parse_rational("4/6").unwrap()), "2/3");
        assert_eq!(format_rational(&parse_rational("-4/2").unwrap()), "-2");
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/2/3").is_err());
    }

    #[test]
    fn exactness() {
        // (a/b)*(c/d) reduces, never rounds
        assert_eq!(rat(2, 3) * rat(3, 2), int(1));
        assert_eq!(rat(1, 3) + rat(1, 6), rat(1, 2));
    }
}
