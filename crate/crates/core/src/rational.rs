//! Exact rational arithmetic helpers.
//!
//! Objective values are accumulated as arbitrary-precision rationals so that
//! lexicographic comparisons and gap computations see exact ties. Small
//! model parameters (balancing factors, slot weights, workloads) fit in
//! `Ratio<i64>`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;
pub type SmallRatio = Ratio<i64>;

pub fn widen(r: SmallRatio) -> Rational {
    Rational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

pub fn from_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `max(0, r)`.
pub fn positive_part(r: Rational) -> Rational {
    if r.is_negative() {
        Rational::zero()
    } else {
        r
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Renders `r` as `"p/q"`, always including the denominator.
pub fn format_exact(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_exact(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n
        .trim()
        .parse()
        .map_err(|_| Error::input(format!("not a rational: {s:?}")))?;
    let d: BigInt = d
        .trim()
        .parse()
        .map_err(|_| Error::input(format!("not a rational: {s:?}")))?;
    if d.is_zero() {
        return Err(Error::input(format!("zero denominator: {s:?}")));
    }
    Ok(Rational::new(n, d))
}

/// Rounds to the nearest integer, ties to even.
fn round_half_even(r: &Rational) -> BigInt {
    let (q, rem): (BigInt, BigInt) = r.numer().div_mod_floor(r.denom());
    let twice: BigInt = rem * 2u32;
    match twice.cmp(r.denom()) {
        std::cmp::Ordering::Less => q,
        std::cmp::Ordering::Greater => q + 1,
        std::cmp::Ordering::Equal => {
            if q.is_even() {
                q
            } else {
                q + 1
            }
        }
    }
}

fn pow10(e: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), e as usize)
}

fn scale10(r: &Rational, e: i64) -> Rational {
    if e >= 0 {
        r * Rational::from_integer(pow10(e as u32))
    } else {
        r / Rational::from_integer(pow10((-e) as u32))
    }
}

/// Plain decimal rendering rounded half-to-even at `sig` significant digits.
/// Trailing zeros after the decimal point are dropped; no exponent notation.
pub fn format_decimal(r: &Rational, sig: u32) -> String {
    assert!(sig >= 1);
    if r.is_zero() {
        return "0".to_string();
    }
    let neg = r.is_negative();
    let a = r.abs();
    // floor(log10(a)), starting from a digit-count estimate
    let mut e = a.numer().to_string().len() as i64 - a.denom().to_string().len() as i64;
    while scale10(&Rational::one(), e) > a {
        e -= 1;
    }
    while scale10(&Rational::one(), e + 1) <= a {
        e += 1;
    }
    let mut m = round_half_even(&scale10(&a, sig as i64 - 1 - e));
    if m == pow10(sig) {
        m /= 10;
        e += 1;
    }
    let digits = m.to_string();
    debug_assert_eq!(digits.len(), sig as usize);
    let point = e + 1;
    let mut out = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), digits)
    } else if point as usize >= digits.len() {
        format!("{}{}", digits, "0".repeat(point as usize - digits.len()))
    } else {
        let (int, frac) = digits.split_at(point as usize);
        format!("{int}.{frac}")
    };
    if out.contains('.') {
        while out.ends_with('0') {
            out.pop();
        }
        if out.ends_with('.') {
            out.pop();
        }
    }
    if neg {
        out.insert(0, '-');
    }
    out
}

/// Exact comparison of `a_num/a_den` with `b_num/b_den` for positive
/// denominators.
pub(crate) fn cmp_fractions(a_num: i128, a_den: i128, b_num: i128, b_den: i128) -> std::cmp::Ordering {
    (a_num * b_den).cmp(&(b_num * a_den))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn one_third_renders_both_ways() {
        assert_eq!(format_decimal(&q(1, 3), 12), "0.333333333333");
        assert_eq!(format_exact(&q(1, 3)), "1/3");
    }

    #[test]
    fn decimal_rendering_edge_cases() {
        assert_eq!(format_decimal(&q(0, 1), 12), "0");
        assert_eq!(format_decimal(&q(1, 2), 12), "0.5");
        assert_eq!(format_decimal(&q(2, 3), 12), "0.666666666667");
        assert_eq!(format_decimal(&q(-2, 3), 12), "-0.666666666667");
        assert_eq!(format_decimal(&q(47, 1), 12), "47");
        assert_eq!(format_decimal(&q(1, 1000), 3), "0.001");
        assert_eq!(format_decimal(&q(123456789, 1), 3), "123000000");
        // 0.9995 at 3 digits rounds up into the next decade
        assert_eq!(format_decimal(&q(9995, 10000), 3), "1");
    }

    #[test]
    fn half_even_ties() {
        // 0.125 -> 0.12 and 0.375 -> 0.38 at 2 significant digits
        assert_eq!(format_decimal(&q(1, 8), 2), "0.12");
        assert_eq!(format_decimal(&q(3, 8), 2), "0.38");
        assert_eq!(format_decimal(&q(5, 2), 1), "2");
        assert_eq!(format_decimal(&q(7, 2), 1), "4");
    }

    #[test]
    fn parse_exact_round_trips() {
        let r = q(-22, 7);
        assert_eq!(parse_exact(&format_exact(&r)).unwrap(), r);
        assert_eq!(parse_exact("5").unwrap(), q(5, 1));
        assert!(parse_exact("1/0").is_err());
        assert!(parse_exact("x").is_err());
    }
}
