//! Outward-rounded interval arithmetic on MPFR floats.
//!
//! A [`Real`] is a closed interval `[lo, hi]` that is guaranteed to contain the
//! exact value it stands for. Every endpoint is produced by a correctly
//! rounded MPFR operation in the outward direction, so enclosures stay valid
//! through any chain of operations. Monotone functions (`ln`, `exp`, `sqrt`)
//! map endpoints directly; products and quotients take the extreme of the
//! four endpoint combinations.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::float::{Constant, Round};
use rug::ops::AssignRound;
use rug::{Float, Integer, Rational};

pub const DEFAULT_PRECISION: u32 = 200;

#[derive(Clone, Debug, PartialEq)]
pub struct Real {
    lo: Float,
    hi: Float,
}

fn down<T>(prec: u32, v: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, v, Round::Down).0
}

fn up<T>(prec: u32, v: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, v, Round::Up).0
}

impl Real {
    /// Builds an interval from explicit bounds. Panics if `lo > hi` or either
    /// bound is NaN.
    pub fn from_bounds(lo: Float, hi: Float) -> Real {
        assert!(!lo.is_nan() && !hi.is_nan(), "NaN bound");
        assert!(lo <= hi, "inverted interval");
        Real { lo, hi }
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Real {
        Real { lo: down(prec, q), hi: up(prec, q) }
    }

    pub fn from_int(n: i64, prec: u32) -> Real {
        Real::from_rational(&Rational::from(n), prec)
    }

    pub fn from_f64(x: f64, prec: u32) -> Real {
        assert!(x.is_finite(), "non-finite f64");
        Real { lo: down(prec, x), hi: up(prec, x) }
    }

    pub fn from_integer(n: &Integer, prec: u32) -> Real {
        Real { lo: down(prec, n), hi: up(prec, n) }
    }

    /// The unbounded interval; the result of dividing by an enclosure of zero.
    pub fn whole(prec: u32) -> Real {
        Real {
            lo: Float::with_val(prec, rug::float::Special::NegInfinity),
            hi: Float::with_val(prec, rug::float::Special::Infinity),
        }
    }

    pub fn pi(prec: u32) -> Real {
        Real { lo: down(prec, Constant::Pi), hi: up(prec, Constant::Pi) }
    }

    pub fn ln2(prec: u32) -> Real {
        Real { lo: down(prec, Constant::Log2), hi: up(prec, Constant::Log2) }
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn mid(&self) -> Float {
        let prec = self.prec() + 2;
        let sum = Float::with_val(prec, &self.lo + &self.hi);
        sum / 2u32
    }

    pub fn width(&self) -> Float {
        up(self.prec(), &self.hi - &self.lo)
    }

    pub fn width_f64(&self) -> f64 {
        self.width().to_f64()
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64()
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn is_positive(&self) -> bool {
        self.lo > 0
    }

    pub fn is_negative(&self) -> bool {
        self.hi < 0
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0 && self.hi >= 0
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        self.lo <= x && self.hi >= x
    }

    pub fn contains_rational(&self, q: &Rational) -> bool {
        self.lo <= *q && self.hi >= *q
    }

    /// True when the whole interval lies strictly below `other`.
    pub fn certainly_lt(&self, other: &Real) -> bool {
        self.hi < other.lo
    }

    pub fn certainly_gt(&self, other: &Real) -> bool {
        self.lo > other.hi
    }

    pub fn overlaps(&self, other: &Real) -> bool {
        !(self.certainly_lt(other) || self.certainly_gt(other))
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &Real) -> Real {
        let lo = if self.lo <= other.lo { self.lo.clone() } else { other.lo.clone() };
        let hi = if self.hi >= other.hi { self.hi.clone() } else { other.hi.clone() };
        Real { lo, hi }
    }

    /// Enclosure of `min(self, other)`.
    pub fn min(&self, other: &Real) -> Real {
        let lo = if self.lo <= other.lo { self.lo.clone() } else { other.lo.clone() };
        let hi = if self.hi <= other.hi { self.hi.clone() } else { other.hi.clone() };
        Real { lo, hi }
    }

    pub fn max(&self, other: &Real) -> Real {
        let lo = if self.lo >= other.lo { self.lo.clone() } else { other.lo.clone() };
        let hi = if self.hi >= other.hi { self.hi.clone() } else { other.hi.clone() };
        Real { lo, hi }
    }

    pub fn abs(&self) -> Real {
        if self.lo >= 0 {
            self.clone()
        } else if self.hi <= 0 {
            -self
        } else {
            let neg_lo = Float::with_val(self.prec(), -&self.lo);
            let hi = if neg_lo > self.hi { neg_lo } else { self.hi.clone() };
            Real { lo: Float::new(self.prec()), hi }
        }
    }

    pub fn recip(&self) -> Real {
        let prec = self.prec();
        if self.contains_zero() {
            return Real::whole(prec);
        }
        Real { lo: down(prec, self.hi.recip_ref()), hi: up(prec, self.lo.recip_ref()) }
    }

    pub fn div(&self, other: &Real) -> Real {
        if other.contains_zero() {
            return Real::whole(self.prec().max(other.prec()));
        }
        self * &other.recip()
    }

    /// Natural logarithm; the lower bound becomes `-inf` when the interval
    /// reaches zero, and the result is the whole line for non-positive input.
    pub fn ln(&self) -> Real {
        let prec = self.prec();
        if self.hi <= 0 {
            return Real::whole(prec);
        }
        let lo = if self.lo <= 0 {
            Float::with_val(prec, rug::float::Special::NegInfinity)
        } else {
            down(prec, self.lo.ln_ref())
        };
        Real { lo, hi: up(prec, self.hi.ln_ref()) }
    }

    pub fn exp(&self) -> Real {
        let prec = self.prec();
        Real { lo: down(prec, self.lo.exp_ref()), hi: up(prec, self.hi.exp_ref()) }
    }

    pub fn sqrt(&self) -> Real {
        let prec = self.prec();
        let lo = if self.lo <= 0 { Float::new(prec) } else { down(prec, self.lo.sqrt_ref()) };
        Real { lo, hi: up(prec, self.hi.sqrt_ref()) }
    }

    /// `self^exponent` for a positive base, as `exp(exponent * ln(self))`.
    pub fn pow(&self, exponent: &Real) -> Real {
        (exponent * &self.ln()).exp()
    }

    /// Riemann zeta on an interval inside `(1, inf)`, where it is decreasing.
    pub fn zeta(&self) -> Real {
        let prec = self.prec();
        assert!(self.lo > 1, "zeta enclosure needs an argument above 1");
        Real { lo: down(prec, self.hi.zeta_ref()), hi: up(prec, self.lo.zeta_ref()) }
    }

    pub fn powi(&self, n: u32) -> Real {
        let mut acc = Real::from_int(1, self.prec());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Decimal rendering of the midpoint with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let m = self.mid();
        if m.is_zero() {
            return "0".to_string();
        }
        m.to_string_radix(10, Some(digits.max(1)))
    }

    /// Number of correct significant decimal digits implied by the width.
    pub fn certified_digits(&self) -> usize {
        let w = self.width().to_f64();
        let m = self.mid().to_f64().abs();
        if w == 0.0 {
            return (self.prec() as f64 * std::f64::consts::LOG10_2) as usize;
        }
        if m == 0.0 || !w.is_finite() {
            return 0;
        }
        ((m / w).log10().floor().max(0.0)) as usize
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = self.certified_digits().clamp(1, 60);
        write!(f, "{}", self.to_decimal(digits))
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        let prec = self.prec();
        Real { lo: Float::with_val(prec, -&self.hi), hi: Float::with_val(prec, -&self.lo) }
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        -&self
    }
}

impl Add for &Real {
    type Output = Real;
    fn add(self, rhs: &Real) -> Real {
        let prec = self.prec().max(rhs.prec());
        Real { lo: down(prec, &self.lo + &rhs.lo), hi: up(prec, &self.hi + &rhs.hi) }
    }
}

impl Sub for &Real {
    type Output = Real;
    fn sub(self, rhs: &Real) -> Real {
        let prec = self.prec().max(rhs.prec());
        Real { lo: down(prec, &self.lo - &rhs.hi), hi: up(prec, &self.hi - &rhs.lo) }
    }
}

impl Mul for &Real {
    type Output = Real;
    fn mul(self, rhs: &Real) -> Real {
        let prec = self.prec().max(rhs.prec());
        let pairs = [(&self.lo, &rhs.lo), (&self.lo, &rhs.hi), (&self.hi, &rhs.lo), (&self.hi, &rhs.hi)];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in pairs {
            // 0 * inf is NaN in IEEE terms; the enclosure treats it as 0.
            let (l, h) = if a.is_zero() || b.is_zero() {
                (Float::new(prec), Float::new(prec))
            } else {
                (down(prec, a * b), up(prec, a * b))
            };
            if lo.as_ref().is_none_or(|cur| l < *cur) {
                lo = Some(l);
            }
            if hi.as_ref().is_none_or(|cur| h > *cur) {
                hi = Some(h);
            }
        }
        Real { lo: lo.unwrap(), hi: hi.unwrap() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Real> for Real {
            type Output = Real;
            fn $m(self, rhs: &'a Real) -> Real {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
