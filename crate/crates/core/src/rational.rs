//! Exact rational scalars.

use alloc::format;
use alloc::string::String;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number used for every exact computation.
pub type Rational = BigRational;

/// Rational from an integer.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational `n / d`. Panics when `d == 0`.
pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p`, `p/q`, or a finite decimal such as `-0.125` or `2.5e-3` exactly.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num = parse_decimal(num.trim())?;
        let den = parse_decimal(den.trim())?;
        if den.is_zero() {
            return None;
        }
        return Some(num / den);
    }
    parse_decimal(text)
}

fn parse_decimal(text: &str) -> Option<Rational> {
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let mut all = String::with_capacity(int_part.len() + frac_part.len());
    all.push_str(int_part);
    all.push_str(frac_part);
    let mantissa = BigInt::parse_bytes(all.as_bytes(), 10)?;
    let mut value = Rational::from_integer(mantissa);
    let scale = exponent - frac_part.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Some(if negative { -value } else { value })
}

/// Formats as `p/q` with an explicit denominator, the wire form used in JSON.
pub fn to_fraction_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Formats compactly: `p` for integers, `p/q` otherwise.
pub fn to_compact_string(q: &Rational) -> String {
    if q.is_integer() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Nearest `f64`.
pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Exact `n`-th root of a non-negative rational, when it is rational.
pub fn exact_root(q: &Rational, n: u32) -> Option<Rational> {
    if n == 0 || q.is_negative() {
        return None;
    }
    if n == 1 || q.is_zero() || q.is_one() {
        return Some(q.clone());
    }
    let num = integer_root(q.numer(), n)?;
    let den = integer_root(q.denom(), n)?;
    Some(Rational::new(num, den))
}

fn integer_root(z: &BigInt, n: u32) -> Option<BigInt> {
    if z.sign() == Sign::Minus {
        return None;
    }
    let r = z.nth_root(n);
    (num_traits::pow(r.clone(), n as usize) == *z).then_some(r)
}

/// Exact `base^exponent` for a rational exponent, when the result is rational.
///
/// Negative bases are accepted only for integer exponents; a zero base only for
/// positive exponents.
pub fn exact_pow(base: &Rational, exponent: &Rational) -> Option<Rational> {
    if exponent.is_integer() {
        let e = exponent.to_integer().to_i64()?;
        if base.is_zero() {
            return match e.signum() {
                1 => Some(Rational::zero()),
                0 => Some(Rational::one()),
                _ => None,
            };
        }
        return Some(if e >= 0 {
            num_traits::pow(base.clone(), e as usize)
        } else {
            num_traits::pow(base.recip(), (-e) as usize)
        });
    }
    if base.is_negative() {
        return None;
    }
    if base.is_zero() {
        return exponent.is_positive().then(Rational::zero);
    }
    let den = exponent.denom().to_u32()?;
    let num = exponent.numer().to_i64()?;
    let root = exact_root(base, den)?;
    exact_pow(&root, &int(num))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("3/4"), Some(frac(3, 4)));
        assert_eq!(parse_rational("-0.125"), Some(frac(-1, 8)));
        assert_eq!(parse_rational("2.5e-1"), Some(frac(1, 4)));
        assert_eq!(parse_rational("7"), Some(int(7)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("."), None);
    }

    #[test]
    fn exact_roots_and_powers() {
        assert_eq!(exact_root(&frac(9, 4), 2), Some(frac(3, 2)));
        assert_eq!(exact_root(&int(2), 2), None);
        assert_eq!(exact_pow(&int(8), &frac(2, 3)), Some(int(4)));
        assert_eq!(exact_pow(&int(-2), &int(-2)), Some(frac(1, 4)));
        assert_eq!(exact_pow(&int(-8), &frac(1, 3)), None);
        assert_eq!(exact_pow(&int(0), &frac(-1, 2)), None);
    }

    #[test]
    fn formatting() {
        assert_eq!(to_fraction_string(&int(3)), "3/1");
        assert_eq!(to_compact_string(&frac(-2, 6)), "-1/3");
    }
}
