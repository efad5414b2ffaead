//! Closed `f64` intervals with outward rounding.
//!
//! Only the handful of operations needed for logarithmic constants and
//! entropies are provided. Every result encloses the exact real result of
//! the operation applied to any points of the operands.

use serde::Serialize;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(v: f64) -> Self {
        Interval { lo: v, hi: v }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn abs(self) -> Self {
        if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            -self
        } else {
            Interval::new(0.0, (-self.lo).max(self.hi))
        }
    }

    pub fn sqr(self) -> Self {
        let a = self.abs();
        Interval::new((a.lo * a.lo).next_down().max(0.0), (a.hi * a.hi).next_up())
    }

    /// Enclosure of `log2` over a positive interval.
    pub fn log2(self) -> Self {
        assert!(self.lo > 0.0, "log2 of a non-positive interval");
        let lo = self.lo.log2();
        let hi = self.hi.log2();
        // libm log2 is accurate to about one ulp; widen by two.
        Interval::new(lo.next_down().next_down(), hi.next_up().next_up())
    }

    /// Enclosure of the square root of a non-negative interval.
    pub fn sqrt(self) -> Self {
        assert!(self.lo >= 0.0, "sqrt of a negative interval");
        // IEEE sqrt is correctly rounded.
        Interval::new(self.lo.sqrt().next_down().max(0.0), self.hi.sqrt().next_up())
    }

    pub fn min_with(self, other: Self) -> Self {
        Interval::new(self.lo.min(other.lo), self.hi.min(other.hi))
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::new(-self.hi, -self.lo)
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, o: Interval) -> Interval {
        Interval::new((self.lo + o.lo).next_down(), (self.hi + o.hi).next_up())
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, o: Interval) -> Interval {
        self + (-o)
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, o: Interval) -> Interval {
        let c = [
            self.lo * o.lo,
            self.lo * o.hi,
            self.hi * o.lo,
            self.hi * o.hi,
        ];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval::new(lo.next_down(), hi.next_up())
    }
}

impl Div for Interval {
    type Output = Interval;
    fn div(self, o: Interval) -> Interval {
        assert!(
            o.lo > 0.0 || o.hi < 0.0,
            "division by an interval containing zero"
        );
        let c = [
            self.lo / o.lo,
            self.lo / o.hi,
            self.hi / o.lo,
            self.hi / o.hi,
        ];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval::new(lo.next_down(), hi.next_up())
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.9}, {:.9}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_encloses() {
        let third = Interval::point(1.0) / Interval::point(3.0);
        assert!(third.lo < third.hi);
        let one = third * Interval::point(3.0);
        assert!(one.contains(1.0));
        let l = Interval::point(3.0).log2();
        assert!(l.contains(3f64.log2()));
        assert!(Interval::point(2.0).sqrt().contains(std::f64::consts::SQRT_2));
    }

    #[test]
    fn abs_and_sqr_straddling_zero() {
        let i = Interval::new(-2.0, 1.0);
        assert_eq!(i.abs().lo, 0.0);
        assert!(i.sqr().contains(4.0));
        assert!(i.sqr().contains(0.0));
    }
}
