use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

/// Commutative ring with context-free constants.
///
/// Elements whose ring needs runtime parameters (residues modulo `p`) carry
/// those parameters themselves, and the integer constants produced by
/// [`Ring::zero`], [`Ring::one`] and [`Ring::from_i64`] adopt them on first
/// contact.
pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_i64(v: i64) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base.clone();
            }
            exp >>= 1;
            if exp > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

/// Integral domain with a divisibility oracle: `exact_div` returns the
/// quotient when `rhs` divides `self`, `None` otherwise (or when `rhs = 0`).
pub trait ExactDiv: Ring {
    fn exact_div(&self, rhs: &Self) -> Option<Self>;

    /// Quotient that is known to exist once integer coefficients are read as
    /// rationals, as in a fraction-free elimination step.
    fn known_quotient(&self, rhs: &Self) -> Option<Self> {
        self.exact_div(rhs)
    }
}

/// A field: every nonzero element is invertible.
pub trait Field: ExactDiv {
    fn inv(&self) -> Option<Self>;

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.clone() * r)
    }
}

impl Ring for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
}

impl ExactDiv for f64 {
    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        if *rhs == 0.0 {
            None
        } else {
            Some(self / rhs)
        }
    }
}

impl Field for f64 {
    fn inv(&self) -> Option<Self> {
        if *self == 0.0 {
            None
        } else {
            Some(1.0 / self)
        }
    }
}
