//! Text parsing for exact rationals and number lists.
//!
//! Accepted rational forms: integers (`-3`), fractions (`1/3`, `-2/7`),
//! decimals (`3.7`, `.5`, `-0.25`) and decimals with an exponent
//! (`1e-3`, `2.5E4`). Decimals are converted exactly, so `3.7` is `37/10`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exponents beyond this magnitude are rejected rather than expanded.
const MAX_EXPONENT: i64 = 4096;

pub fn parse_rational(text: &str) -> Result<BigRational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_integer(num.trim())?;
        let den = parse_integer(den.trim())?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in '{s}'")));
        }
        return Ok(BigRational::new(num, den));
    }
    parse_decimal(s)
}

fn parse_integer(s: &str) -> Result<BigInt> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("invalid integer '{s}'")));
    }
    s.parse::<BigInt>()
        .map_err(|e| Error::Parse(format!("invalid integer '{s}': {e}")))
}

fn parse_decimal(s: &str) -> Result<BigRational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], Some(&s[pos + 1..])),
        None => (s, None),
    };
    let (negative, body) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::Parse(format!("invalid number '{s}'")));
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("invalid number '{s}'")));
    }
    let mut exp10: i64 = -(frac_part.len() as i64);
    if let Some(e) = exponent {
        let digits = e.strip_prefix(['+', '-']).unwrap_or(e);
        if digits.is_empty() || digits.len() > 6 || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("invalid exponent in '{s}'")));
        }
        let value: i64 = e
            .parse()
            .map_err(|_| Error::Parse(format!("invalid exponent in '{s}'")))?;
        exp10 += value;
    }
    if exp10.abs() > MAX_EXPONENT {
        return Err(Error::Parse(format!("exponent out of range in '{s}'")));
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(digits.parse::<BigInt>().unwrap_or_default());
    let ten = BigRational::from_integer(BigInt::from(10));
    let scale = num_traits::pow(ten, exp10.unsigned_abs() as usize);
    if exp10 >= 0 {
        value *= scale;
    } else {
        value /= scale;
    }
    Ok(if negative { -value } else { value })
}

/// Comma-separated list of rationals, e.g. `1,2,4` or `1/3, 2/7, 5`.
pub fn parse_rational_list(text: &str) -> Result<Vec<BigRational>> {
    if text.trim().is_empty() {
        return Err(Error::Parse("empty list".into()));
    }
    text.split(',').map(parse_rational).collect()
}

/// Comma-separated list of floats.
pub fn parse_f64_list(text: &str) -> Result<Vec<f64>> {
    if text.trim().is_empty() {
        return Err(Error::Parse("empty list".into()));
    }
    text.split(',')
        .map(|item| {
            let item = item.trim();
            item.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Parse(format!("invalid number '{item}'")))
        })
        .collect()
}

/// Canonical text for a rational: `a` or `a/b` with `b > 1`.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Nearest double; `inf` beyond the double range.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or_else(|| {
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parses_integer_fraction_and_decimal_forms() {
        assert_eq!(parse_rational("4").unwrap(), q(4, 1));
        assert_eq!(parse_rational("-2/6").unwrap(), q(-1, 3));
        assert_eq!(parse_rational("3.7").unwrap(), q(37, 10));
        assert_eq!(parse_rational(".5").unwrap(), q(1, 2));
        assert_eq!(parse_rational("1e-3").unwrap(), q(1, 1000));
        assert_eq!(parse_rational("-2.5E2").unwrap(), q(-250, 1));
        assert_eq!(parse_rational(" 2/3 ").unwrap(), q(2, 3));
    }

    #[test]
    fn rejects_malformed_numbers() {
        for bad in ["", "1/0", "a", "1//2", "--1", "1e", "1e99999999", ".", "1.2.3", "1/2/3", "+"] {
            assert!(parse_rational(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn lists() {
        let v = parse_rational_list("1/3,2/7,5").unwrap();
        assert_eq!(v, vec![q(1, 3), q(2, 7), q(5, 1)]);
        assert!(parse_rational_list("1,,2").is_err());
        assert_eq!(parse_f64_list("1, -2.5,3e-1").unwrap(), vec![1.0, -2.5, 0.3]);
        assert!(parse_f64_list("1,nan").is_err());
    }

    #[test]
    fn formats_canonically() {
        assert_eq!(format_rational(&q(6, 3)), "2");
        assert_eq!(format_rational(&q(-3, 4)), "-3/4");
    }
}
