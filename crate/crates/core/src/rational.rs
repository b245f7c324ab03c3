//! Exact rational helpers shared by the LP, hierarchy and enumerator code.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q_int(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn q_frac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn big_pow(base: u32, exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

pub fn q_pow(base: u32, exp: i32) -> Q {
    let p = Q::from_integer(big_pow(base, exp.unsigned_abs()));
    if exp >= 0 {
        p
    } else {
        p.recip()
    }
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn to_f64(q: &Q) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Exact conversion of a finite `f64`; NaN and infinities map to `None`.
pub fn from_f64(x: f64) -> Option<Q> {
    Q::from_float(x)
}

/// True when the decimal expansion of `q` terminates.
pub fn is_terminating(q: &Q) -> bool {
    let mut d = q.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while d.is_even() {
        d /= &two;
    }
    while (&d % &five).is_zero() {
        d /= &five;
    }
    d.is_one()
}

/// Rounds `q` to `digits` fractional digits, half away from zero, and returns
/// the scaled integer `round(q * 10^digits)`.
fn round_scaled(q: &Q, digits: u32) -> BigInt {
    let scale = Q::from_integer(big_pow(10, digits));
    let scaled = q * scale;
    let half = q_frac(1, 2);
    if scaled.is_negative() {
        -((-scaled) + half).floor().to_integer()
    } else {
        (scaled + half).floor().to_integer()
    }
}

fn format_scaled(v: &BigInt, digits: u32) -> String {
    let neg = v.sign() == Sign::Minus;
    let mut s = v.abs().to_string();
    let digits = digits as usize;
    if digits == 0 {
        return if neg { format!("-{s}") } else { s };
    }
    if s.len() <= digits {
        s = "0".repeat(digits + 1 - s.len()) + &s;
    }
    let (int, frac) = s.split_at(s.len() - digits);
    let out = format!("{int}.{frac}");
    if neg {
        format!("-{out}")
    } else {
        out
    }
}

/// Renders `q` in decimal with exactly `digits` fractional digits (rounded
/// half away from zero).
pub fn to_fixed(q: &Q, digits: u32) -> String {
    format_scaled(&round_scaled(q, digits), digits)
}

/// Renders `q` exactly when its expansion terminates within `max_digits`
/// fractional digits, otherwise rounds to `max_digits`. Trailing zeros are
/// stripped, but at least one fractional digit is kept.
pub fn to_decimal(q: &Q, max_digits: u32) -> String {
    let mut s = to_fixed(q, max_digits);
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.push('0');
        }
    }
    s
}

/// Parses a plain decimal literal such as `-0.125` or `3` into an exact
/// rational.
pub fn parse_decimal(s: &str) -> Option<Q> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let num: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().ok()?
    };
    let q = Q::new(num, big_pow(10, frac.len() as u32));
    Some(if neg { -q } else { q })
}

/// Parses `p/q` or a decimal literal.
pub fn parse_rational(s: &str) -> Option<Q> {
    match s.split_once('/') {
        Some((p, d)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Q::new(p, d))
            }
        }
        None => parse_decimal(s),
    }
}

/// Number of fractional digits in a printed decimal literal.
pub fn printed_digits(s: &str) -> u32 {
    s.trim()
        .split_once('.')
        .map(|(_, f)| f.len() as u32)
        .unwrap_or(0)
}

/// True when `q` rounded to the number of fractional digits printed in
/// `printed` reproduces `printed` exactly.
pub fn matches_printed(q: &Q, printed: &str) -> bool {
    match parse_decimal(printed) {
        Some(p) => {
            let d = printed_digits(printed);
            round_scaled(q, d) == round_scaled(&p, d)
        }
        None => false,
    }
}
