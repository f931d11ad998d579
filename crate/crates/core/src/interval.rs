//! Outward-rounded interval arithmetic and the [`Scalar`] abstraction.
//!
//! Every bound function in this crate is written once, generically over
//! [`Scalar`], and evaluated three ways: as plain `f64` for point values, as
//! [`Interval`] for certified range enclosures, and as [`Dual<Interval>`] for
//! certified derivative enclosures.
//!
//! Intervals do not rely on hardware rounding modes. Each primitive computes
//! the round-to-nearest result at the relevant endpoints and then widens the
//! result by [`INFLATE_ULPS`] units in the last place in each direction. The
//! elementary functions used here (`exp`, `sinh`, `tanh`, `acos`, ...) are
//! accurate to well under one ulp in the platform libm, so the inflated
//! result contains the exact range.

use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Outward widening applied after every primitive, in ulps per side.
pub const INFLATE_ULPS: u32 = 4;

#[inline]
fn down(mut x: f64) -> f64 {
    if x.is_nan() || x == f64::NEG_INFINITY {
        return x;
    }
    for _ in 0..INFLATE_ULPS {
        x = x.next_down();
    }
    x
}

#[inline]
fn up(mut x: f64) -> f64 {
    if x.is_nan() || x == f64::INFINITY {
        return x;
    }
    for _ in 0..INFLATE_ULPS {
        x = x.next_up();
    }
    x
}

/// Numeric type the bound functions are generic over.
pub trait Scalar:
    Copy
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// A value known exactly in binary floating point (small integers, 0.5, ...).
    fn exact(v: f64) -> Self;
    /// A rounded approximation of a real constant; intervals widen it.
    fn approx(v: f64) -> Self;

    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sqrt(self) -> Self;
    fn sinh(self) -> Self;
    fn cosh(self) -> Self;
    fn tanh(self) -> Self;
    fn asinh(self) -> Self;
    fn acos(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn sqr(self) -> Self;
    fn recip(self) -> Self;

    /// Certain ordering: `Some(true)` if `self < other` holds for every
    /// represented value, `Some(false)` if `self >= other` always holds.
    fn certainly_less(self, other: Self) -> Option<bool>;
    /// Convex hull; only meaningful for set-valued scalars.
    fn hull(self, other: Self) -> Self;
    fn min(self, other: Self) -> Self;
    fn max(self, other: Self) -> Self;

    /// Representative point value (midpoint for intervals).
    fn mid(self) -> f64;
}

impl Scalar for f64 {
    fn exact(v: f64) -> Self {
        v
    }
    fn approx(v: f64) -> Self {
        v
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn sinh(self) -> Self {
        f64::sinh(self)
    }
    fn cosh(self) -> Self {
        f64::cosh(self)
    }
    fn tanh(self) -> Self {
        f64::tanh(self)
    }
    fn asinh(self) -> Self {
        f64::asinh(self)
    }
    fn acos(self) -> Self {
        f64::acos(self)
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn sqr(self) -> Self {
        self * self
    }
    fn recip(self) -> Self {
        1.0 / self
    }
    fn certainly_less(self, other: Self) -> Option<bool> {
        Some(self < other)
    }
    fn hull(self, other: Self) -> Self {
        0.5 * (self + other)
    }
    fn min(self, other: Self) -> Self {
        f64::min(self, other)
    }
    fn max(self, other: Self) -> Self {
        f64::max(self, other)
    }
    fn mid(self) -> f64 {
        self
    }
}

/// Closed interval `[lo, hi]` with outward-safe endpoints.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.17e}, {:.17e}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Interval {
    pub const ENTIRE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    /// Panics if `lo > hi` or either end is NaN.
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "invalid interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    fn outward(lo: f64, hi: f64) -> Self {
        if lo.is_nan() || hi.is_nan() {
            return Interval::ENTIRE;
        }
        Interval {
            lo: down(lo),
            hi: up(hi),
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0.0 && 0.0 <= self.hi
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// Splits at the midpoint.
    pub fn bisect(&self) -> (Interval, Interval) {
        let m = self.midpoint();
        (Interval::new(self.lo, m), Interval::new(m, self.hi))
    }

    /// Smallest magnitude over the interval.
    pub fn mig(&self) -> f64 {
        if self.contains_zero() {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    /// Largest magnitude over the interval.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    fn increasing(self, f: impl Fn(f64) -> f64) -> Self {
        Interval::outward(f(self.lo), f(self.hi))
    }

    fn clamp_below(self, floor: f64) -> Self {
        Interval {
            lo: self.lo.max(floor),
            hi: self.hi.max(floor),
        }
    }

    fn clamp_above(self, ceil: f64) -> Self {
        Interval {
            lo: self.lo.min(ceil),
            hi: self.hi.min(ceil),
        }
    }

    /// Range of `cos` over the interval, accounting for interior extrema.
    fn cos_range(self) -> Self {
        if !self.is_finite() || self.width() >= 2.0 * PI {
            return Interval::new(-1.0, 1.0);
        }
        let (ca, cb) = (self.lo.cos(), self.hi.cos());
        let mut lo = ca.min(cb);
        let mut hi = ca.max(cb);
        // Extrema of cos sit at k*pi; the slack covers the rounding of pi.
        let slack = 1e-12 * (1.0 + self.mag());
        let k_first = ((self.lo - slack) / PI).ceil() as i64;
        let k_last = ((self.hi + slack) / PI).floor() as i64;
        for k in k_first..=k_last {
            if k.rem_euclid(2) == 0 {
                hi = 1.0;
            } else {
                lo = -1.0;
            }
        }
        let r = Interval::outward(lo, hi);
        Interval {
            lo: r.lo.max(-1.0),
            hi: r.hi.min(1.0),
        }
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval::outward(self.lo + rhs.lo, self.hi + rhs.hi)
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval::outward(self.lo - rhs.hi, self.hi - rhs.lo)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let p = [
            self.lo * rhs.lo,
            self.lo * rhs.hi,
            self.hi * rhs.lo,
            self.hi * rhs.hi,
        ];
        if p.iter().any(|v| v.is_nan()) {
            // 0 * inf
            return Interval::ENTIRE;
        }
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval::outward(lo, hi)
    }
}

impl Div for Interval {
    type Output = Interval;
    fn div(self, rhs: Interval) -> Interval {
        self * rhs.recip()
    }
}

impl Scalar for Interval {
    fn exact(v: f64) -> Self {
        Interval::point(v)
    }
    fn approx(v: f64) -> Self {
        Interval::outward(v, v)
    }
    fn exp(self) -> Self {
        self.increasing(f64::exp).clamp_below(0.0)
    }
    fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return Interval::ENTIRE;
        }
        let lo = if self.lo <= 0.0 {
            f64::NEG_INFINITY
        } else {
            down(self.lo.ln())
        };
        Interval {
            lo,
            hi: up(self.hi.ln()),
        }
    }
    fn sqrt(self) -> Self {
        if self.hi < 0.0 {
            return Interval::ENTIRE;
        }
        self.clamp_below(0.0)
            .increasing(f64::sqrt)
            .clamp_below(0.0)
    }
    fn sinh(self) -> Self {
        self.increasing(f64::sinh)
    }
    fn cosh(self) -> Self {
        let (a, b) = (self.lo.cosh(), self.hi.cosh());
        let hi = a.max(b);
        let lo = if self.contains_zero() { 1.0 } else { a.min(b) };
        Interval::outward(lo, hi).clamp_below(1.0)
    }
    fn tanh(self) -> Self {
        let r = self.increasing(f64::tanh);
        Interval {
            lo: r.lo.max(-1.0),
            hi: r.hi.min(1.0),
        }
    }
    fn asinh(self) -> Self {
        self.increasing(f64::asinh)
    }
    fn acos(self) -> Self {
        let c = self.clamp_below(-1.0).clamp_above(1.0);
        Interval::outward(c.hi.acos(), c.lo.acos())
            .clamp_below(0.0)
            .clamp_above(up(PI))
    }
    fn sin(self) -> Self {
        (self - Interval::approx(FRAC_PI_2)).cos_range()
    }
    fn cos(self) -> Self {
        self.cos_range()
    }
    fn sqr(self) -> Self {
        let (m, g) = (self.mig(), self.mag());
        Interval::outward(m * m, g * g).clamp_below(0.0)
    }
    fn recip(self) -> Self {
        if self.contains_zero() {
            return Interval::ENTIRE;
        }
        Interval::outward(1.0 / self.hi, 1.0 / self.lo)
    }
    fn certainly_less(self, other: Self) -> Option<bool> {
        if self.hi < other.lo {
            Some(true)
        } else if self.lo >= other.hi {
            Some(false)
        } else {
            None
        }
    }
    fn hull(self, other: Self) -> Self {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }
    fn min(self, other: Self) -> Self {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.min(other.hi),
        }
    }
    fn max(self, other: Self) -> Self {
        Interval {
            lo: self.lo.max(other.lo),
            hi: self.hi.max(other.hi),
        }
    }
    fn mid(self) -> f64 {
        self.midpoint()
    }
}

/// First-order forward-mode dual number `value + deriv·ε`.
///
/// With `T = Interval` the `deriv` component encloses the derivative of the
/// evaluated expression over the whole input interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual<T> {
    pub value: T,
    pub deriv: T,
}

impl<T: Scalar> Dual<T> {
    /// The independent variable.
    pub fn variable(x: T) -> Self {
        Dual {
            value: x,
            deriv: T::exact(1.0),
        }
    }

    pub fn constant(x: T) -> Self {
        Dual {
            value: x,
            deriv: T::exact(0.0),
        }
    }

    fn chain(self, value: T, outer_deriv: T) -> Self {
        Dual {
            value,
            deriv: outer_deriv * self.deriv,
        }
    }
}

impl<T: Scalar> Add for Dual<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Dual {
            value: self.value + rhs.value,
            deriv: self.deriv + rhs.deriv,
        }
    }
}

impl<T: Scalar> Sub for Dual<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Dual {
            value: self.value - rhs.value,
            deriv: self.deriv - rhs.deriv,
        }
    }
}

impl<T: Scalar> Neg for Dual<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual {
            value: -self.value,
            deriv: -self.deriv,
        }
    }
}

impl<T: Scalar> Mul for Dual<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Dual {
            value: self.value * rhs.value,
            deriv: self.deriv * rhs.value + self.value * rhs.deriv,
        }
    }
}

impl<T: Scalar> Div for Dual<T> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self * rhs.recip()
    }
}

impl<T: Scalar> Scalar for Dual<T> {
    fn exact(v: f64) -> Self {
        Dual::constant(T::exact(v))
    }
    fn approx(v: f64) -> Self {
        Dual::constant(T::approx(v))
    }
    fn exp(self) -> Self {
        let e = self.value.exp();
        self.chain(e, e)
    }
    fn ln(self) -> Self {
        self.chain(self.value.ln(), self.value.recip())
    }
    fn sqrt(self) -> Self {
        let s = self.value.sqrt();
        self.chain(s, (T::exact(2.0) * s).recip())
    }
    fn sinh(self) -> Self {
        self.chain(self.value.sinh(), self.value.cosh())
    }
    fn cosh(self) -> Self {
        self.chain(self.value.cosh(), self.value.sinh())
    }
    fn tanh(self) -> Self {
        // sech^2 from cosh, not 1 - tanh^2, which saturates.
        self.chain(self.value.tanh(), self.value.cosh().sqr().recip())
    }
    fn asinh(self) -> Self {
        let d = (T::exact(1.0) + self.value.sqr()).sqrt().recip();
        self.chain(self.value.asinh(), d)
    }
    fn acos(self) -> Self {
        let d = -(T::exact(1.0) - self.value.sqr()).sqrt().recip();
        self.chain(self.value.acos(), d)
    }
    fn sin(self) -> Self {
        self.chain(self.value.sin(), self.value.cos())
    }
    fn cos(self) -> Self {
        self.chain(self.value.cos(), -self.value.sin())
    }
    fn sqr(self) -> Self {
        self.chain(self.value.sqr(), T::exact(2.0) * self.value)
    }
    fn recip(self) -> Self {
        let r = self.value.recip();
        self.chain(r, -r.sqr())
    }
    fn certainly_less(self, other: Self) -> Option<bool> {
        self.value.certainly_less(other.value)
    }
    fn hull(self, other: Self) -> Self {
        Dual {
            value: self.value.hull(other.value),
            deriv: self.deriv.hull(other.deriv),
        }
    }
    fn min(self, other: Self) -> Self {
        match self.value.certainly_less(other.value) {
            Some(true) => self,
            Some(false) => other,
            // Generalised gradient: any one-sided derivative of either branch.
            None => Dual {
                value: self.value.min(other.value),
                deriv: self.deriv.hull(other.deriv),
            },
        }
    }
    fn max(self, other: Self) -> Self {
        match self.value.certainly_less(other.value) {
            Some(true) => other,
            Some(false) => self,
            None => Dual {
                value: self.value.max(other.value),
                deriv: self.deriv.hull(other.deriv),
            },
        }
    }
    fn mid(self) -> f64 {
        self.value.mid()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample(iv: Interval, k: usize, n: usize) -> f64 {
        iv.lo + (iv.hi - iv.lo) * k as f64 / n as f64
    }

    #[test]
    fn cos_range_catches_interior_extrema() {
        let c = Interval::new(-0.1, 0.1).cos();
        assert_eq!(c.hi, 1.0);
        let c = Interval::new(3.0, 3.3).cos();
        assert_eq!(c.lo, -1.0);
        let s = Interval::new(1.5, 1.7).sin();
        assert_eq!(s.hi, 1.0);
    }

    #[test]
    fn recip_of_straddling_interval_is_entire() {
        assert_eq!(Interval::new(-1.0, 1.0).recip(), Interval::ENTIRE);
    }

    #[test]
    fn sqr_of_straddling_interval_starts_at_zero() {
        let s = Interval::new(-1.0, 2.0).sqr();
        assert_eq!(s.lo, 0.0);
        assert!(s.hi >= 4.0);
    }

    #[test]
    fn exp_underflow_stays_nonnegative() {
        let e = Interval::new(-2000.0, -1000.0).exp();
        assert!(e.lo >= 0.0 && e.hi > 0.0 && e.hi < 1e-300);
    }

    #[test]
    fn dual_derivative_matches_closed_form() {
        let x = Dual::variable(0.7_f64);
        let y = (x.sinh() * x.cos()).exp();
        let expected = (0.7f64.cosh() * 0.7f64.cos() - 0.7f64.sinh() * 0.7f64.sin())
            * (0.7f64.sinh() * 0.7f64.cos()).exp();
        assert!((y.deriv - expected).abs() < 1e-14);
    }

    fn expr<T: Scalar>(x: T) -> T {
        let t = (x * T::exact(0.5)).tanh();
        (t.sqr() + x.cosh().recip()).sqrt() * (-x).exp() + x.asinh() - (x * T::exact(0.25)).acos()
            + x.sin().sqr()
    }

    proptest! {
        #[test]
        fn enclosure_contains_samples(a in 0.01f64..3.0, w in 0.0f64..0.5) {
            let iv = Interval::new(a, a + w);
            let enc = expr(iv);
            for k in 0..=16 {
                let x = sample(iv, k, 16);
                let v = expr(x);
                prop_assert!(enc.contains(v), "{v} not in {enc:?}");
            }
        }

        #[test]
        fn derivative_enclosure_contains_point_derivatives(a in 0.01f64..3.0, w in 0.0f64..0.3) {
            let iv = Interval::new(a, a + w);
            let enc = expr(Dual::variable(iv)).deriv;
            for k in 0..=8 {
                let x = sample(iv, k, 8);
                let d = expr(Dual::variable(x)).deriv;
                prop_assert!(enc.contains(d), "{d} not in {enc:?}");
            }
        }
    }
}
