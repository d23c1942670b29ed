use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::bigfloat::BigFloat;

/// Real-number operations shared by `f64` and [`BigFloat`]. Constants are
/// created "like" an existing value so they inherit its precision.
pub trait Real:
    Clone
    + PartialOrd
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn int_like(&self, v: i64) -> Self;
    /// `None` for negative input.
    fn sqrt_checked(&self) -> Option<Self>;
    fn abs_val(&self) -> Self;
    fn cos_val(&self) -> Self;
    fn pi_like(&self) -> Self;
    /// Unit roundoff at this value's precision.
    fn epsilon_like(&self) -> Self;
    fn ten_pow_neg_like(&self, n: u32) -> Self;
    fn as_f64(&self) -> f64;

    fn is_negative_val(&self) -> bool {
        *self < self.int_like(0)
    }

    fn max_val(&self, other: &Self) -> Self {
        if other > self {
            other.clone()
        } else {
            self.clone()
        }
    }
}

impl Real for f64 {
    fn int_like(&self, v: i64) -> Self {
        v as f64
    }
    fn sqrt_checked(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
    fn cos_val(&self) -> Self {
        self.cos()
    }
    fn pi_like(&self) -> Self {
        std::f64::consts::PI
    }
    fn epsilon_like(&self) -> Self {
        f64::EPSILON
    }
    fn ten_pow_neg_like(&self, n: u32) -> Self {
        10f64.powi(-(n.min(400) as i32))
    }
    fn as_f64(&self) -> f64 {
        *self
    }
}

impl Real for BigFloat {
    fn int_like(&self, v: i64) -> Self {
        BigFloat::from_i64(v, self.precision())
    }
    fn sqrt_checked(&self) -> Option<Self> {
        self.sqrt()
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
    fn cos_val(&self) -> Self {
        self.cos()
    }
    fn pi_like(&self) -> Self {
        BigFloat::pi(self.precision())
    }
    fn epsilon_like(&self) -> Self {
        BigFloat::epsilon(self.precision())
    }
    fn ten_pow_neg_like(&self, n: u32) -> Self {
        let p = self.precision();
        BigFloat::from_i64(1, p) / BigFloat::from_i64(10, p).powi(n)
    }
    fn as_f64(&self) -> f64 {
        self.to_f64()
    }
}
