//! Exact fractions as text: the `"p/q"` encoding shared by every file format.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Renders a rational as a fully reduced `"p/q"` string with `q > 0`.
/// Integers keep their `/1` denominator.
pub fn to_string(x: &BigRational) -> String {
    // BigRational is kept reduced with a positive denominator by construction.
    format!("{}/{}", x.numer(), x.denom())
}

/// Strict parse used for file fields: exactly `p/q`, reduced, `q > 0`.
pub fn parse_reduced(s: &str) -> Result<BigRational> {
    let (p, q) = s
        .split_once('/')
        .ok_or_else(|| Error::Format(format!("expected reduced fraction \"p/q\", got {s:?}")))?;
    let p = parse_int(p, s)?;
    let q = parse_int(q, s)?;
    if !q.is_positive() {
        return Err(Error::Format(format!("denominator must be positive in {s:?}")));
    }
    if !p.gcd(&q).is_one() {
        return Err(Error::Format(format!("fraction {s:?} is not reduced")));
    }
    Ok(BigRational::new_raw(p, q))
}

/// Lenient parse for command-line values: an integer or `p/q` (any
/// representation, reduced on the way in). Decimal floats are rejected.
pub fn parse_loose(s: &str) -> Result<BigRational> {
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(parse_int(s, s)?)),
        Some((p, q)) => {
            let p = parse_int(p, s)?;
            let q = parse_int(q, s)?;
            if q.is_zero() {
                return Err(Error::Format(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(p, q))
        }
    }
}

fn parse_int(part: &str, whole: &str) -> Result<BigInt> {
    let t = part.trim();
    let digits = t.strip_prefix('-').unwrap_or(t);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Format(format!("not an exact fraction: {whole:?}")));
    }
    t.parse::<BigInt>()
        .map_err(|_| Error::Format(format!("not an exact fraction: {whole:?}")))
}

pub fn pow(x: &BigRational, exp: u32) -> BigRational {
    num_traits::pow(x.clone(), exp as usize)
}

/// Approximate `log2(x)` for a positive rational, good to about 1e-15
/// relative error regardless of magnitude.
pub fn log2(x: &BigRational) -> f64 {
    assert!(x.is_positive(), "log2 of non-positive rational");
    log2_int(x.numer()) - log2_int(x.denom())
}

fn log2_int(v: &BigInt) -> f64 {
    let bits = v.bits();
    // keep the top 63 bits as mantissa
    let shift = bits.saturating_sub(63);
    let top: BigInt = v >> shift;
    let top: f64 = top.to_string().parse().expect("bigint prints as integer");
    top.log2() + shift as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn strict_parse_accepts_reduced_only() {
        assert_eq!(parse_reduced("101/100").unwrap(), r(101, 100));
        assert_eq!(parse_reduced("4096/1").unwrap(), r(4096, 1));
        assert!(parse_reduced("2/4").is_err());
        assert!(parse_reduced("3").is_err());
        assert!(parse_reduced("1/-2").is_err());
        assert!(parse_reduced("4096/1 * (101/100)^7").is_err());
        assert!(parse_reduced("0.5/1").is_err());
    }

    #[test]
    fn loose_parse() {
        assert_eq!(parse_loose("10").unwrap(), r(10, 1));
        assert_eq!(parse_loose("2/4").unwrap(), r(1, 2));
        assert!(parse_loose("1.5").is_err());
        assert!(parse_loose("1/0").is_err());
        assert!(parse_loose("").is_err());
    }

    #[test]
    fn render() {
        assert_eq!(to_string(&r(6, 3)), "2/1");
        assert_eq!(to_string(&r(-1, 2)), "-1/2");
    }

    #[test]
    fn log2_matches_float_on_small_and_huge() {
        assert!((log2(&r(8, 1)) - 3.0).abs() < 1e-12);
        assert!((log2(&r(101, 100)) - 1.01f64.log2()).abs() < 1e-12);
        let huge = pow(&r(3, 1), 500);
        assert!((log2(&huge) - 500.0 * 3f64.log2()).abs() < 1e-9);
    }
}
