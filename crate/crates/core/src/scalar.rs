//! Minimal real-number abstraction so the coefficient algebra can run in
//! plain `f64` or in double-double precision without duplication.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use twofloat::TwoFloat;

pub trait Scalar:
    Copy
    + Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn of(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn sqrt(self) -> Self;

    fn abs(self) -> Self {
        if self < Self::of(0.0) {
            -self
        } else {
            self
        }
    }
}

impl Scalar for f64 {
    #[inline]
    fn of(x: f64) -> Self {
        x
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
}

/// Double-double scalar.
///
/// Addition, subtraction and multiplication come from `twofloat`; its
/// division is only good to about `1e-16` relative, so quotients are
/// corrected here with two residual steps.
#[derive(Debug, Clone, Copy, Default, PartialEq, PartialOrd)]
pub struct Dd(TwoFloat);

impl Dd {
    pub fn hi(self) -> f64 {
        self.0.hi()
    }
    pub fn lo(self) -> f64 {
        self.0.lo()
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, rhs: Dd) -> Dd {
        Dd(self.0 + rhs.0)
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, rhs: Dd) -> Dd {
        Dd(self.0 - rhs.0)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, rhs: Dd) -> Dd {
        Dd(self.0 * rhs.0)
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd(-self.0)
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, rhs: Dd) -> Dd {
        let b = rhs.0.hi();
        let q1 = self.0.hi() / b;
        if !q1.is_finite() {
            return Dd(TwoFloat::from(q1));
        }
        let r1 = self.0 - rhs.0 * q1;
        let q2 = r1.hi() / b;
        let r2 = r1 - rhs.0 * q2;
        let q3 = r2.hi() / b;
        Dd(TwoFloat::new_add(q1, q2) + q3)
    }
}

impl Scalar for Dd {
    #[inline]
    fn of(x: f64) -> Self {
        Dd(TwoFloat::from(x))
    }
    #[inline]
    fn to_f64(self) -> f64 {
        f64::from(self.0)
    }
    fn sqrt(self) -> Self {
        if self <= Dd::of(0.0) {
            return Dd::of(self.to_f64().sqrt());
        }
        // One Newton correction on top of the f64 estimate.
        let s = Dd::of(self.to_f64().sqrt());
        s + (self - s * s) / (Dd::of(2.0) * s)
    }
}
