//! Closed intervals of `f64` with outward rounding.
//!
//! Add, subtract, multiply, divide and square root round in the correct
//! direction only when the floating-point result is actually inexact: the
//! rounding error is recovered with an error-free transform (two-sum, or an
//! `fma` residual) and the endpoint is nudged by one ulp only when the error
//! points outward. Exact operations therefore stay exact, which keeps
//! quantities such as `1 - u^2` at `u = 1` pinned to zero instead of drifting
//! below it.
//!
//! `exp` and `ln` come from the platform libm, which is not correctly
//! rounded. Their results are widened by [`LIBM_ULPS`] ulps on each side.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Ulp padding applied to libm transcendental results.
pub const LIBM_ULPS: u32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

/// Error raised when an operation is applied outside its domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DomainIssue {
    /// Part of the argument may lie outside the domain; a narrower argument
    /// could still succeed.
    Possible,
    /// The whole argument lies outside the domain.
    Definite,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

/// `s` rounded so that it is `<=` the exact value `s + err`.
fn down(s: f64, err: f64) -> f64 {
    if !s.is_finite() {
        return s;
    }
    if err < 0.0 {
        s.next_down()
    } else {
        s
    }
}

fn up(s: f64, err: f64) -> f64 {
    if !s.is_finite() {
        return s;
    }
    if err > 0.0 {
        s.next_up()
    } else {
        s
    }
}

fn add_down(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    down(s, e)
}

fn add_up(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    up(s, e)
}

fn mul_down(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let p = a * b;
    down(p, a.mul_add(b, -p))
}

fn mul_up(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let p = a * b;
    up(p, a.mul_add(b, -p))
}

/// Sign of `a/b - q` from the residual `a - q*b`.
fn div_err(a: f64, b: f64, q: f64) -> f64 {
    let r = (-q).mul_add(b, a);
    if b > 0.0 {
        r
    } else {
        -r
    }
}

fn div_down(a: f64, b: f64) -> f64 {
    let q = a / b;
    down(q, div_err(a, b, q))
}

fn div_up(a: f64, b: f64) -> f64 {
    let q = a / b;
    up(q, div_err(a, b, q))
}

fn pad_down(mut x: f64, ulps: u32) -> f64 {
    for _ in 0..ulps {
        x = x.next_down();
    }
    x
}

fn pad_up(mut x: f64, ulps: u32) -> f64 {
    for _ in 0..ulps {
        x = x.next_up();
    }
    x
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// Enclosure of pi. `std::f64::consts::PI` is the nearest double below pi.
    pub fn pi() -> Self {
        let p = std::f64::consts::PI;
        Interval { lo: p, hi: p.next_up() }
    }

    /// Enclosure of a real known to within `ulps` of `x`.
    pub fn around(x: f64, ulps: u32) -> Self {
        Interval { lo: pad_down(x, ulps), hi: pad_up(x, ulps) }
    }

    pub fn mid(&self) -> f64 {
        if self.lo.is_finite() && self.hi.is_finite() {
            0.5 * self.lo + 0.5 * self.hi
        } else {
            0.5 * (self.lo + self.hi)
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    /// Largest absolute value in the interval.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn abs(self) -> Interval {
        if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            -self
        } else {
            Interval { lo: 0.0, hi: self.mag() }
        }
    }

    pub fn sqr(self) -> Interval {
        let a = self.abs();
        Interval { lo: mul_down(a.lo, a.lo), hi: mul_up(a.hi, a.hi) }
    }

    pub fn powi(self, n: u32) -> Interval {
        match n {
            0 => Interval::ONE,
            1 => self,
            _ if n.is_multiple_of(2) => {
                let a = self.abs();
                let mut acc = Interval::ONE;
                for _ in 0..n {
                    acc = acc * a;
                }
                acc
            }
            _ => {
                let lo_pow = (0..n).fold(Interval::ONE, |acc, _| acc * Interval::point(self.lo));
                let hi_pow = (0..n).fold(Interval::ONE, |acc, _| acc * Interval::point(self.hi));
                Interval { lo: lo_pow.lo, hi: hi_pow.hi }
            }
        }
    }

    pub fn sqrt(self) -> Result<Interval, DomainIssue> {
        if self.hi < 0.0 {
            return Err(DomainIssue::Definite);
        }
        if self.lo < 0.0 {
            return Err(DomainIssue::Possible);
        }
        let sqrt_down = |x: f64| {
            let s = x.sqrt();
            down(s, (-s).mul_add(s, x))
        };
        let sqrt_up = |x: f64| {
            let s = x.sqrt();
            up(s, (-s).mul_add(s, x))
        };
        Ok(Interval { lo: sqrt_down(self.lo).max(0.0), hi: sqrt_up(self.hi) })
    }

    pub fn exp(self) -> Interval {
        Interval {
            lo: pad_down(self.lo.exp(), LIBM_ULPS).max(0.0),
            hi: pad_up(self.hi.exp(), LIBM_ULPS),
        }
    }

    pub fn ln(self) -> Result<Interval, DomainIssue> {
        if self.hi <= 0.0 {
            return Err(DomainIssue::Definite);
        }
        if self.lo <= 0.0 {
            return Err(DomainIssue::Possible);
        }
        Ok(Interval {
            lo: pad_down(self.lo.ln(), LIBM_ULPS),
            hi: pad_up(self.hi.ln(), LIBM_ULPS),
        })
    }

    pub fn checked_div(self, rhs: Interval) -> Result<Interval, DomainIssue> {
        if rhs.lo == 0.0 && rhs.hi == 0.0 {
            return Err(DomainIssue::Definite);
        }
        if rhs.contains_zero() {
            return Err(DomainIssue::Possible);
        }
        let cands_lo = [
            div_down(self.lo, rhs.lo),
            div_down(self.lo, rhs.hi),
            div_down(self.hi, rhs.lo),
            div_down(self.hi, rhs.hi),
        ];
        let cands_hi = [
            div_up(self.lo, rhs.lo),
            div_up(self.lo, rhs.hi),
            div_up(self.hi, rhs.lo),
            div_up(self.hi, rhs.hi),
        ];
        Ok(Interval {
            lo: cands_lo.iter().copied().fold(f64::INFINITY, f64::min),
            hi: cands_hi.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        })
    }

    pub fn max(self, other: Interval) -> Interval {
        Interval { lo: self.lo.max(other.lo), hi: self.hi.max(other.hi) }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval { lo: add_down(self.lo, rhs.lo), hi: add_up(self.hi, rhs.hi) }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        self + (-rhs)
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let pairs = [
            (self.lo, rhs.lo),
            (self.lo, rhs.hi),
            (self.hi, rhs.lo),
            (self.hi, rhs.hi),
        ];
        let lo = pairs.iter().map(|&(a, b)| mul_down(a, b)).fold(f64::INFINITY, f64::min);
        let hi = pairs.iter().map(|&(a, b)| mul_up(a, b)).fold(f64::NEG_INFINITY, f64::max);
        Interval { lo, hi }
    }
}

impl Div for Interval {
    type Output = Interval;
    /// Panics when the divisor contains zero; use [`Interval::checked_div`]
    /// where that can happen.
    fn div(self, rhs: Interval) -> Interval {
        self.checked_div(rhs).expect("interval division by a range containing zero")
    }
}
