//! Exact rational numbers and the few conversions the solvers need.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

use crate::interval::Interval;

/// Arbitrary-precision rational, always kept in lowest terms.
pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{literal}`: {reason}")]
pub struct ParseRatError {
    pub literal: String,
    pub reason: &'static str,
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"0.25"`.
pub fn parse_rat(s: &str) -> Result<Rat, ParseRatError> {
    let err = |reason| ParseRatError {
        literal: s.to_string(),
        reason,
    };
    let t = s.trim();
    if t.is_empty() {
        return Err(err("empty"));
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err("bad numerator"))?;
        let d: BigInt = d.trim().parse().map_err(|_| err("bad denominator"))?;
        if d.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        if fp.is_empty() || !fp.bytes().all(|c| c.is_ascii_digit()) {
            return Err(err("bad decimal"));
        }
        let neg = ip.starts_with('-');
        let ip_abs = ip.trim_start_matches(['-', '+']);
        let whole: BigInt = if ip_abs.is_empty() {
            BigInt::zero()
        } else {
            ip_abs.parse().map_err(|_| err("bad decimal"))?
        };
        let frac: BigInt = fp.parse().map_err(|_| err("bad decimal"))?;
        let scale = num_traits::pow(BigInt::from(10u32), fp.len());
        let mag = Rat::new(whole * &scale + frac, scale);
        return Ok(if neg { -mag } else { mag });
    }
    let n: BigInt = t.parse().map_err(|_| err("bad integer"))?;
    Ok(Rat::from_integer(n))
}

/// Canonical `"num/den"` rendering (integers keep the `/1`).
pub fn fmt_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a log-scale estimate for huge operands.
        let l = log2_interval(&r.abs()).mid();
        let v = l.exp2();
        if r.is_negative() {
            -v
        } else {
            v
        }
    })
}

/// Six-decimal rendering used in human-readable reports.
pub struct Decimal<'a>(pub &'a Rat);

impl fmt::Display for Decimal<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.6}", to_f64(self.0))
    }
}

pub fn in_unit_interval(r: &Rat) -> bool {
    !r.is_negative() && r <= &Rat::one()
}

/// Largest multiple of `2^-bits` not exceeding `r`.
pub fn floor_dyadic(r: &Rat, bits: u32) -> Rat {
    let scale = BigInt::one() << bits;
    let scaled = r.numer() * &scale;
    let q = scaled.div_floor(r.denom());
    Rat::new(q, scale)
}

/// Smallest `k` with `2^k >= r`, for positive `r`.
pub fn ceil_log2(r: &Rat) -> i64 {
    assert!(r.is_positive(), "ceil_log2 of a non-positive rational");
    // Start from the bit-length estimate, then fix up exactly.
    let est = r.numer().bits() as i64 - r.denom().bits() as i64;
    let mut k = est - 1;
    while pow2(k) < *r {
        k += 1;
    }
    while k > i64::MIN + 1 && pow2(k - 1) >= *r {
        k -= 1;
    }
    k
}

pub fn pow2(k: i64) -> Rat {
    if k >= 0 {
        Rat::from_integer(BigInt::one() << (k as usize))
    } else {
        Rat::new(BigInt::one(), BigInt::one() << ((-k) as usize))
    }
}

fn log2_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().expect("fits in f64").log2();
    }
    let shift = bits - 64;
    let top: BigUint = n >> shift;
    top.to_f64().expect("64-bit head").log2() + shift as f64
}

/// Enclosure of `log2(r)` for positive `r`.
pub fn log2_interval(r: &Rat) -> Interval {
    assert!(r.is_positive(), "log2 of a non-positive rational");
    let (_, n) = r.numer().clone().into_parts();
    let d = r.denom().magnitude();
    if n.is_one() && d.is_one() {
        return Interval::point(0.0);
    }
    let v = log2_biguint(&n) - log2_biguint(d);
    // Each log2 is correctly rounded to within an ulp or two; the head
    // truncation for huge operands costs at most 2^-63 relative.
    let slack = (v.abs() * 8.0 * f64::EPSILON).max(1e-300) + 4e-18 * (1.0 + v.abs());
    Interval::new((v - slack).next_down(), (v + slack).next_up())
}

/// Tight enclosure of a rational as an `f64` interval.
pub fn rat_interval(r: &Rat) -> Interval {
    let v = to_f64(r);
    let back = Rat::from_float(v);
    match back {
        Some(b) if b == *r => Interval::point(v),
        Some(b) if b < *r => Interval::new(v, v.next_up()),
        Some(_) => Interval::new(v.next_down(), v),
        None => Interval::new(v.next_down(), v.next_up()),
    }
}

pub fn sign_of(r: &Rat) -> Sign {
    r.numer().sign()
}
