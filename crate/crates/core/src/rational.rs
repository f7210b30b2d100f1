//! Exact rational helpers shared by the bound and codec modules.

use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse {0:?} as an exact rational (use `num/den` or a decimal)")]
pub struct ParseRationalError(pub String);

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `a/b`, an integer, or a finite decimal such as `-0.125` without
/// going through binary floating point.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(text.to_string());
    let t = text.trim();
    if let Some((num, den)) = t.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| err())?;
        let den: BigInt = den.trim().parse().map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(num, den));
    }
    let (negative, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(err());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!("{whole}{frac}");
    let num: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| err())?
    };
    let den = num::pow(BigInt::from(10), frac.len());
    let value = Rational::new(num, den);
    Ok(if negative { -value } else { value })
}

/// `num/den` (or just `num` for integers).
pub fn format_exact(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decimal rendering rounded half away from zero to `digits` places.
pub fn format_decimal(r: &Rational, digits: usize) -> String {
    let scale = num::pow(BigInt::from(10), digits);
    let scaled = r * Rational::from_integer(scale.clone());
    let half = ratio(1, 2);
    let rounded = if scaled.is_negative() {
        -((-scaled) + half).floor()
    } else {
        (scaled + half).floor()
    };
    let n = rounded.to_integer();
    let negative = n.is_negative();
    let (q, rem) = n.abs().div_rem(&scale);
    let sign = if negative { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{q}")
    } else {
        format!("{sign}{q}.{:0>width$}", rem.to_string(), width = digits)
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn floor_to_u64(r: &Rational) -> Option<u64> {
    r.floor().to_integer().to_u64()
}

pub fn ceil_to_u64(r: &Rational) -> Option<u64> {
    r.ceil().to_integer().to_u64()
}

pub fn floor_to_usize(r: &Rational) -> Option<usize> {
    floor_to_u64(r).and_then(|v| usize::try_from(v).ok())
}

pub fn ceil_to_usize(r: &Rational) -> Option<usize> {
    ceil_to_u64(r).and_then(|v| usize::try_from(v).ok())
}

/// Closest rational to `x` with denominator `<= max_den` (continued fractions).
pub fn approximate_f64(x: f64, max_den: u64) -> Rational {
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if k2 > BigInt::from(max_den) {
            break;
        }
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let frac = rest - a;
        if frac.abs() < 1e-15 {
            break;
        }
        rest = 1.0 / frac;
    }
    Rational::new(h1, k1)
}

/// Smallest rational `>= sqrt(x)` whose denominator is at most `max_den`.
/// Exact whenever `sqrt(x)` itself is such a rational.
pub fn sqrt_ceil(x: &Rational, max_den: u64) -> Rational {
    assert!(!x.is_negative(), "square root of a negative rational");
    let (a, b) = (x.numer().clone(), x.denom().clone());
    let mut best: Option<Rational> = None;
    for den in 1..=max_den {
        let den = BigInt::from(den);
        // smallest num with num^2 * b >= den^2 * a
        let target = &den * &den * &a;
        let mut num = (&target / &b).sqrt();
        while &num * &num * &b < target {
            num += 1;
        }
        let cand = Rational::new(num, den);
        if best.as_ref().is_none_or(|b| &cand < b) {
            best = Some(cand);
        }
    }
    best.expect("max_den >= 1")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_exact_forms() {
        assert_eq!(parse_rational("0.2").unwrap(), ratio(1, 5));
        assert_eq!(parse_rational("-1.25").unwrap(), ratio(-5, 4));
        assert_eq!(parse_rational("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1e-3").is_err());
    }

    #[test]
    fn formats() {
        assert_eq!(format_exact(&ratio(26, 3)), "26/3");
        assert_eq!(format_exact(&int(6)), "6");
        assert_eq!(format_decimal(&ratio(26, 3), 4), "8.6667");
        assert_eq!(format_decimal(&ratio(-1, 8), 2), "-0.13");
        assert_eq!(format_decimal(&ratio(1, 200), 2), "0.01");
        assert_eq!(format_decimal(&int(3), 0), "3");
    }

    #[test]
    fn sqrt_ceil_exact_and_upper() {
        assert_eq!(sqrt_ceil(&ratio(1, 25), 1 << 16), ratio(1, 5));
        assert_eq!(sqrt_ceil(&ratio(4, 100), 1 << 16), ratio(1, 5));
        assert_eq!(sqrt_ceil(&int(0), 16), int(0));
        let r = sqrt_ceil(&ratio(1, 2), 1000);
        assert!(&r * &r >= ratio(1, 2));
        assert!((to_f64(&r) - 0.5f64.sqrt()).abs() < 1e-5);
    }

    #[test]
    fn approximates_irrationals() {
        let r = approximate_f64(2f64.sqrt() - 1.0, 1 << 30);
        assert!((to_f64(&r) - (2f64.sqrt() - 1.0)).abs() < 1e-12);
    }
}
