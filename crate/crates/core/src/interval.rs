//! Closed real intervals with outward-padded arithmetic.
//!
//! Floating-point endpoints are widened by a few ulps after each product so the
//! enclosure survives rounding; the numeric content here never needs more than
//! a handful of operations per interval.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::Mul;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    /// `[mid - rad, mid + rad]`.
    pub fn around(mid: f64, rad: f64) -> Self {
        Self::new(mid - rad.abs(), mid + rad.abs())
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersection(&self, other: &Interval) -> Option<Interval> {
        self.intersects(other)
            .then(|| Interval::new(self.lo.max(other.lo), self.hi.min(other.hi)))
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval::new(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    /// Widen each endpoint outward by `ulps` units in the last place.
    pub fn pad_ulps(self, ulps: u32) -> Interval {
        let mut lo = self.lo;
        let mut hi = self.hi;
        for _ in 0..ulps {
            lo = next_down(lo);
            hi = next_up(hi);
        }
        Interval { lo, hi }
    }

    /// Widen by a relative amount `rel` of the largest endpoint magnitude.
    pub fn pad_rel(self, rel: f64) -> Interval {
        let r = rel * self.lo.abs().max(self.hi.abs());
        Interval::new(self.lo - r, self.hi + r)
    }

    pub fn scale(self, c: f64) -> Interval {
        let (a, b) = (self.lo * c, self.hi * c);
        Interval::new(a.min(b), a.max(b)).pad_ulps(1)
    }

    /// `|mid(a) - mid(b)| / max(|mid(a)|, |mid(b)|)`.
    pub fn relative_discrepancy(&self, other: &Interval) -> f64 {
        let (a, b) = (self.mid(), other.mid());
        (a - b).abs() / a.abs().max(b.abs())
    }
}

impl Mul for Interval {
    type Output = Interval;

    fn mul(self, rhs: Interval) -> Interval {
        let c = [self.lo * rhs.lo, self.lo * rhs.hi, self.hi * rhs.lo, self.hi * rhs.hi];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval::new(lo, hi).pad_ulps(1)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.12e}, {:.12e}]", self.lo, self.hi)
    }
}

fn next_up(x: f64) -> f64 {
    if x.is_nan() || x == f64::INFINITY {
        return x;
    }
    if x == 0.0 {
        return f64::from_bits(1);
    }
    let b = x.to_bits();
    f64::from_bits(if x > 0.0 { b + 1 } else { b - 1 })
}

fn next_down(x: f64) -> f64 {
    -next_up(-x)
}
