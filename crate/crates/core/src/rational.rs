//! Arbitrary-precision rationals and a few helpers used across the crate.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}

/// Integer value of `x` if it is integral and fits into `usize`.
pub fn to_usize(x: &Rational) -> Option<usize> {
    if !is_integer(x) || x.is_negative() {
        return None;
    }
    x.numer().to_usize()
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"0.25"`.
pub fn parse(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|e| format!("bad numerator in {s:?}: {e}"))?;
        let d = BigInt::from_str(d.trim()).map_err(|e| format!("bad denominator in {s:?}: {e}"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("bad decimal {s:?}"));
        }
        let negative = whole.starts_with('-');
        let whole = if whole.is_empty() || whole == "-" {
            "0"
        } else {
            whole
        };
        let w = BigInt::from_str(whole).map_err(|e| format!("bad decimal {s:?}: {e}"))?;
        let f = BigInt::from_str(frac).map_err(|e| format!("bad decimal {s:?}: {e}"))?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let magnitude = w.abs() * &scale + f;
        let n = if negative { -magnitude } else { magnitude };
        return Ok(Rational::new(n, scale));
    }
    BigInt::from_str(s)
        .map(Rational::from_integer)
        .map_err(|e| format!("bad rational {s:?}: {e}"))
}

/// `p/q` or `p` when the denominator is one.
pub fn format(x: &Rational) -> String {
    if is_integer(x) {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn lcm_of_denominators<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse("10/3").unwrap(), rat(10, 3));
        assert_eq!(parse("-2").unwrap(), int(-2));
        assert_eq!(parse("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse("-1.5").unwrap(), rat(-3, 2));
        assert_eq!(parse(" 4/6 ").unwrap(), rat(2, 3));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
        assert!(parse("1.").is_err());
    }

    #[test]
    fn format_round_trips() {
        for s in ["0", "7", "-3/4", "10/3"] {
            assert_eq!(format(&parse(s).unwrap()), s);
        }
    }
}
