//! Exact rational scalars and the small combinatorial helpers built on them.

use num::bigint::BigInt;
use num::{BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational coefficient used throughout the crate.
pub type Q = BigRational;

/// Builds `n/d` as an exact rational.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Builds the integer `n` as an exact rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Formats a rational as `p/q`, or `p` when the denominator is one.
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p`, `-p`, `p/q` or `+p/q`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let s = s.strip_prefix('+').unwrap_or(s);
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    match s.split_once('/') {
        Some((a, b)) => {
            let n: BigInt = a.trim().parse().map_err(|_| bad())?;
            let d: BigInt = b.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Integer power with a possibly negative exponent.
pub fn qpow(x: &Q, e: i32) -> Q {
    if e >= 0 {
        num::pow(x.clone(), e as usize)
    } else {
        num::pow(x.recip(), e.unsigned_abs() as usize)
    }
}

/// Generalized binomial coefficient `C(e, k)` for any integer `e`.
pub fn binom(e: i32, k: u32) -> Q {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k as i64 {
        num *= BigInt::from(e as i64 - i);
        den *= BigInt::from(i + 1);
    }
    Q::new(num, den)
}

/// Ordinary binomial coefficient as a machine integer.
pub fn binom_u(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// p-adic valuation of a nonzero rational.
pub fn valuation(x: &Q, p: u64) -> i64 {
    assert!(!x.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let count = |mut n: BigInt| {
        let mut v = 0;
        n = n.abs();
        while (&n % &p).is_zero() {
            n /= &p;
            v += 1;
        }
        v
    };
    count(x.numer().clone()) - count(x.denom().clone())
}

/// Converts to `i64` when the value is an integer that fits.
pub fn to_i64(x: &Q) -> Option<i64> {
    if x.denom().is_one() {
        x.numer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "-3", "1/2", "-29/224", "12345678901234567890123/7"] {
            assert_eq!(fmt_q(&parse_q(s).unwrap()), s);
        }
        assert_eq!(parse_q("4/8").unwrap(), q(1, 2));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("abc").is_err());
    }

    #[test]
    fn generalized_binomials() {
        assert_eq!(binom(5, 2), qi(10));
        assert_eq!(binom(-1, 3), qi(-1));
        assert_eq!(binom(-2, 2), qi(3));
        assert_eq!(binom(2, 3), qi(0));
        assert_eq!(binom_u(10, 3), 120);
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&q(45, 2), 3), 2);
        assert_eq!(valuation(&q(2, 27), 3), -3);
        assert_eq!(valuation(&q(-1, 60), 5), -1);
    }
}
