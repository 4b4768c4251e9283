//! Exact decimal parsing and deterministic rendering of rationals.
//! Parsing never goes through floating point: `"1e-12"` becomes the exact
//! fraction `1/10^12`.

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::{int, ratio, Int, Rational};

/// Parse a decimal literal (`-3`, `0.5`, `1e-12`, `2.75e+3`) into an exact
/// rational.
pub fn parse_decimal(s: &str) -> Result<Rational> {
    let bad = || Error::BadDecimal(s.to_string());
    let trimmed = s.trim();
    let (negative, rest) = match trimmed.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, trimmed.strip_prefix('+').unwrap_or(trimmed)),
    };
    let (mantissa, exp_text) = match rest.split_once(['e', 'E']) {
        Some((m, e)) => (m, Some(e)),
        None => (rest, None),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits: Int = format!("{int_part}{frac_part}").parse().map_err(|_| bad())?;
    let exp: i64 = match exp_text {
        Some(e) if !e.is_empty() => e.parse().map_err(|_| bad())?,
        Some(_) => return Err(bad()),
        None => 0,
    };
    if exp.abs() > 1_000_000 {
        return Err(bad());
    }
    let shift = exp - frac_part.len() as i64;
    let value = if shift >= 0 {
        Rational::from(digits * int(10).pow(shift as u32))
    } else {
        Rational::new(digits, int(10).pow((-shift) as u32))
    };
    Ok(if negative { -value } else { value })
}

/// `"p/q"` with the sign on the numerator; denominators are always positive.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn round_half_away(x: &Rational) -> Int {
    let half = ratio(1, 2);
    if x.is_negative() {
        -((x.abs() + half).floor().to_integer())
    } else {
        (x.clone() + half).floor().to_integer()
    }
}

/// Fixed-point rendering with `digits` fractional digits, rounding half away
/// from zero. A value that rounds to zero is printed without a sign.
pub fn format_fixed(r: &Rational, digits: u32) -> String {
    let scaled = r * Rational::from(int(10).pow(digits));
    let rounded = round_half_away(&scaled);
    let sign = if rounded.is_negative() { "-" } else { "" };
    let mut magnitude = rounded.abs().to_string();
    if magnitude.len() <= digits as usize {
        magnitude = format!("{}{}", "0".repeat(digits as usize + 1 - magnitude.len()), magnitude);
    }
    if digits == 0 {
        return format!("{sign}{magnitude}");
    }
    let split = magnitude.len() - digits as usize;
    format!("{sign}{}.{}", &magnitude[..split], &magnitude[split..])
}

fn decimal_digits(v: &Int) -> i64 {
    let s = v.abs().to_string();
    s.len() as i64
}

fn pow10_int(e: u32) -> Int {
    int(10).pow(e)
}

// |r| >= 10^e ?
fn at_least_pow10(r: &Rational, e: i64) -> bool {
    let num = r.numer().abs();
    let den = r.denom().clone();
    if e >= 0 {
        num >= den * pow10_int(e as u32)
    } else {
        num * pow10_int((-e) as u32) >= den
    }
}

/// Scientific rendering with `sig` significant digits (`sig >= 1`), e.g.
/// `"1.53e-264"`. Exact values of any magnitude render without intermediate
/// floating point; zero renders as `"0"`.
pub fn format_scientific(r: &Rational, sig: u32) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let sig = sig.max(1);
    let sign = if r.is_negative() { "-" } else { "" };
    let a = r.abs();
    // exponent e with 10^e <= |r| < 10^(e+1)
    let mut e = decimal_digits(a.numer()) - decimal_digits(a.denom());
    while !at_least_pow10(&a, e) {
        e -= 1;
    }
    while at_least_pow10(&a, e + 1) {
        e += 1;
    }
    // mantissa rounded to sig digits
    let shift = sig as i64 - 1 - e;
    let scaled = if shift >= 0 {
        &a * Rational::from(pow10_int(shift as u32))
    } else {
        &a / Rational::from(pow10_int((-shift) as u32))
    };
    let mut mantissa = round_half_away(&scaled);
    let mut e = e;
    if decimal_digits(&mantissa) > sig as i64 {
        // rounding carried into one more digit (e.g. 9.99 -> 10.0)
        mantissa = pow10_int(sig - 1);
        e += 1;
    }
    let digits = mantissa.to_string();
    if sig == 1 {
        format!("{sign}{digits}e{e}")
    } else {
        format!("{sign}{}.{}e{e}", &digits[..1], &digits[1..])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::pow10_neg;

    #[test]
    fn parses_exactly() {
        assert_eq!(parse_decimal("1e-12").unwrap(), pow10_neg(12));
        assert_eq!(parse_decimal("0.5").unwrap(), ratio(1, 2));
        assert_eq!(parse_decimal("-2.75").unwrap(), ratio(-11, 4));
        assert_eq!(parse_decimal("3").unwrap(), ratio(3, 1));
        assert_eq!(parse_decimal("2.5e3").unwrap(), ratio(2500, 1));
        assert_eq!(parse_decimal("+.25").unwrap(), ratio(1, 4));
        assert!(parse_decimal("").is_err());
        assert!(parse_decimal(".").is_err());
        assert!(parse_decimal("1.2.3").is_err());
        assert!(parse_decimal("1e").is_err());
        assert!(parse_decimal("0x10").is_err());
    }

    #[test]
    fn renders_fixed() {
        assert_eq!(format_fixed(&ratio(-30, 11), 12), "-2.727272727273");
        assert_eq!(format_fixed(&ratio(1, 2), 3), "0.500");
        assert_eq!(format_fixed(&ratio(0, 1), 2), "0.00");
        assert_eq!(format_fixed(&ratio(-1, 100000), 3), "0.000");
        assert_eq!(format_fixed(&ratio(5, 1), 0), "5");
        assert_eq!(format_fixed(&ratio(1, 18), 6), "0.055556");
    }

    #[test]
    fn renders_scientific() {
        assert_eq!(format_scientific(&ratio(0, 1), 3), "0");
        assert_eq!(format_scientific(&ratio(1, 1000), 3), "1.00e-3");
        assert_eq!(format_scientific(&ratio(-30, 11), 4), "-2.727e0");
        assert_eq!(format_scientific(&ratio(999, 1), 2), "1.0e3");
        assert_eq!(format_scientific(&pow10_neg(264), 3), "1.00e-264");
        assert_eq!(format_scientific(&ratio(152, 100), 1), "2e0");
        assert_eq!(format_scientific(&ratio(98765, 1), 3), "9.88e4");
    }

    #[test]
    fn parse_render_round_trip_on_fixed() {
        for s in ["0.125", "-3.500", "17.000", "0.001"] {
            let v = parse_decimal(s).unwrap();
            assert_eq!(format_fixed(&v, 3), s);
        }
    }
}
