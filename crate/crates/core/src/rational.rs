//! Exact rationals on the wire: `"p/q"` in lowest terms, or `"p"` for integers.

use num::{BigInt, BigRational, One, Signed};

use crate::error::{Error, Result};

pub fn to_text(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse(text: &str) -> Result<BigRational> {
    let bad = || Error::Malformed {
        what: "rational",
        reason: format!("`{text}` is not of the form p or p/q"),
    };
    let (p, q) = match text.trim().split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text.trim(), "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_positive() {
        Ok(BigRational::new(p, q))
    } else {
        Err(bad())
    }
}

pub fn int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn frac(p: impl Into<BigInt>, q: impl Into<BigInt>) -> BigRational {
    BigRational::new(p.into(), q.into())
}

/// `(p, q)` with `p/q = x` in lowest terms, if both fit in `i64`.
pub fn small_parts(x: &BigRational) -> Option<(i64, i64)> {
    use num::ToPrimitive;
    Some((x.numer().to_i64()?, x.denom().to_i64()?))
}
