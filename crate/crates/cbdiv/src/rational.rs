//! Formatting and parsing of exact rationals as `"p/q"` strings.
//!
//! All serialized formats in this crate carry rationals in lowest terms,
//! `"p/q"` with a positive denominator, integers without the `/1`, and
//! plain `"0"` for zero.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// Renders a rational in lowest terms (`BigRational` keeps itself reduced).
pub fn ratio_to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p/q"` or a bare integer.
pub fn ratio_from_str(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidInput(format!("malformed rational {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(p))
        }
    }
}

/// Integer-valued rationals as `i64`; `None` when not an integer or out of range.
pub fn ratio_to_i64(r: &BigRational) -> Option<i64> {
    if r.denom().is_one() {
        i64::try_from(r.numer()).ok()
    } else {
        None
    }
}

pub fn ratio_from_i64(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}
