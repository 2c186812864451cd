//! Exact rational helpers on top of `num-rational`.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"3"`, `"-1.25"`, `"2e-3"` or `"7/12"` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let q: BigInt = q.trim().parse().map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..].parse().map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(Error::Parse(format!("bad number {s:?}")));
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(Error::Parse(format!("bad number {s:?}")));
    }
    let digits = format!("{ip}{fp}");
    let mut num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().unwrap() };
    if neg {
        num = -num;
    }
    let scale = exp - fp.len() as i64;
    let ten = BigInt::from(10);
    let r = if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(r)
}

/// Canonical `p/q` rendering used in every JSON artifact.
pub fn to_pq(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Short rendering: integers without the denominator.
pub fn to_short(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        to_pq(r)
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Exact value of a finite double.
pub fn from_f64(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| Error::InvalidArgument(format!("non-finite value {x}")))
}

/// Rounds `x` down onto the grid `1/den`.
pub fn floor_to_denominator(x: &Rational, den: u64) -> Rational {
    let d = BigInt::from(den);
    let scaled = x * Rational::from_integer(d.clone());
    Rational::new(scaled.floor().to_integer(), d)
}

/// Bits needed for numerator and denominator together.
pub fn bit_size(r: &Rational) -> u64 {
    r.numer().bits() + r.denom().bits()
}

pub fn is_even_integer(r: &Rational) -> bool {
    r.is_integer() && r.numer().is_even()
}

/// True when the reduced numerator is even and the denominator odd.
pub fn has_even_numerator_odd_denominator(r: &Rational) -> bool {
    r.numer().is_even() && r.denom().is_odd()
}

pub fn big(v: u128) -> BigInt {
    BigInt::from(v)
}

pub fn to_u128(v: &BigInt) -> Result<u128> {
    if v.sign() == Sign::Minus {
        return Err(Error::Overflow(format!("negative value {v}")));
    }
    v.to_u128().ok_or_else(|| Error::Overflow(format!("{v} exceeds 128 bits")))
}

pub fn half() -> Rational {
    Rational::new(BigInt::one(), BigInt::from(2))
}
