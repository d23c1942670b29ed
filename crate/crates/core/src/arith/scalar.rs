//! The dynamically typed coefficient used throughout the kernel.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::bigfloat::BigFloat;
use super::modint::ModInt;
use super::ring::{ExactDiv, Field, Ring};
use super::ArithError;

/// A coefficient from one of the supported number domains.
///
/// Mixed operands are promoted: integers and rationals adopt the kind of the
/// other operand (rational, residue, binary64 or big float). Rationals with
/// denominator one are always stored as [`Scalar::Int`].
#[derive(Clone, Debug)]
pub enum Scalar {
    Int(BigInt),
    Rat(BigRational),
    Mod(ModInt),
    F64(f64),
    Big(BigFloat),
}

impl Scalar {
    pub fn int(v: impl Into<BigInt>) -> Scalar {
        Scalar::Int(v.into())
    }

    /// Canonical rational `num/den`.
    pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Scalar, ArithError> {
        let num = num.into();
        let den = den.into();
        if den.is_zero() {
            return Err(ArithError::ZeroDenominator);
        }
        Ok(Scalar::from_rational(BigRational::new(num, den)))
    }

    pub fn from_rational(r: BigRational) -> Scalar {
        if r.denom().is_one() {
            Scalar::Int(r.numer().clone())
        } else {
            Scalar::Rat(r)
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Int(_) | Scalar::Rat(_) | Scalar::Mod(_))
    }

    pub fn is_float(&self) -> bool {
        matches!(self, Scalar::F64(_) | Scalar::Big(_))
    }

    /// Value as a rational, for integers and rationals only.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            Scalar::Int(i) => Some(BigRational::from_integer(i.clone())),
            Scalar::Rat(r) => Some(r.clone()),
            _ => None,
        }
    }

    pub fn as_integer(&self) -> Option<&BigInt> {
        match self {
            Scalar::Int(i) => Some(i),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Int(i) => i.to_f64().unwrap_or(f64::NAN),
            Scalar::Rat(r) => rational_to_f64(r),
            Scalar::Mod(m) => m.value() as f64,
            Scalar::F64(f) => *f,
            Scalar::Big(b) => b.to_f64(),
        }
    }

    /// Sign for ordered kinds; residues are never negative.
    pub fn signum(&self) -> i32 {
        match self {
            Scalar::Int(i) => i.sign() as i32 - 1,
            Scalar::Rat(r) => {
                if r.is_negative() {
                    -1
                } else if r.is_zero() {
                    0
                } else {
                    1
                }
            }
            Scalar::Mod(m) => (!m.is_zero()) as i32,
            Scalar::F64(f) => {
                if *f < 0.0 {
                    -1
                } else if *f > 0.0 {
                    1
                } else {
                    0
                }
            }
            Scalar::Big(b) => {
                if b.is_negative() {
                    -1
                } else if b.is_zero() {
                    0
                } else {
                    1
                }
            }
        }
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Scalar {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Field division; integer operands yield a rational.
    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar, ArithError> {
        Ok(self.clone() * rhs.try_inv()?)
    }

    pub fn try_inv(&self) -> Result<Scalar, ArithError> {
        if Ring::is_zero(self) {
            return Err(match self {
                Scalar::Mod(_) => ArithError::ZeroInversion,
                _ => ArithError::DivisionByZero,
            });
        }
        Ok(match self {
            Scalar::Int(i) => Scalar::from_rational(BigRational::new(BigInt::one(), i.clone())),
            Scalar::Rat(r) => Scalar::from_rational(r.recip()),
            Scalar::Mod(m) => Scalar::Mod(m.inverse()?),
            Scalar::F64(f) => Scalar::F64(1.0 / f),
            Scalar::Big(b) => Scalar::Big(BigFloat::from_i64(1, b.precision()) / b.clone()),
        })
    }

    /// Integer gcd (non-negative); `None` unless both are integers.
    pub fn int_gcd(&self, rhs: &Scalar) -> Option<Scalar> {
        match (self, rhs) {
            (Scalar::Int(a), Scalar::Int(b)) => Some(Scalar::Int(a.gcd(b))),
            _ => None,
        }
    }

    /// Order for real kinds; `None` for residues.
    pub fn compare(&self, rhs: &Scalar) -> Option<Ordering> {
        match promote(self, rhs) {
            (Scalar::Int(a), Scalar::Int(b)) => Some(a.cmp(&b)),
            (Scalar::Rat(a), Scalar::Rat(b)) => Some(a.cmp(&b)),
            (Scalar::F64(a), Scalar::F64(b)) => a.partial_cmp(&b),
            (Scalar::Big(a), Scalar::Big(b)) => a.partial_cmp(&b),
            _ => None,
        }
    }

    /// Bit length of an integer's magnitude, or of a rational's larger part.
    pub fn bit_length(&self) -> u64 {
        match self {
            Scalar::Int(i) => i.bits(),
            Scalar::Rat(r) => r.numer().bits().max(r.denom().bits()),
            Scalar::Mod(m) => 64 - m.value().leading_zeros() as u64,
            _ => 64,
        }
    }

    /// Rendering with `places` decimals for floating kinds.
    pub fn format_places(&self, places: u32) -> String {
        match self {
            Scalar::F64(f) => format_f64(*f, places),
            Scalar::Big(b) => b.to_decimal(places),
            other => other.to_string(),
        }
    }
}

/// `f64` with exactly `places` decimals, ties to even on the exact binary
/// value, and no negative zero.
pub fn format_f64(v: f64, places: u32) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    // Exact decimal expansion of the binary value, then rounded.
    match BigFloat::from_f64(v, 64) {
        Ok(b) => b.to_decimal(places),
        Err(_) => v.to_string(),
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    BigFloat::from_ratio(r.numer(), r.denom(), 64)
        .map(|b| b.to_f64())
        .unwrap_or(f64::NAN)
}

fn to_mod(s: &Scalar, modulus: u64) -> ModInt {
    match s {
        Scalar::Int(i) => {
            let r = i.mod_floor(&BigInt::from(modulus));
            ModInt::from_u64(r.to_u64().unwrap_or(0), modulus)
        }
        Scalar::Rat(r) => {
            let n = to_mod(&Scalar::Int(r.numer().clone()), modulus);
            let d = to_mod(&Scalar::Int(r.denom().clone()), modulus);
            n * d
                .inverse()
                .expect("rational denominator divisible by the modulus")
        }
        Scalar::Mod(m) => *m,
        Scalar::F64(_) | Scalar::Big(_) => panic!("floating value used as a residue"),
    }
}

fn to_big(s: &Scalar, prec: u32) -> BigFloat {
    match s {
        Scalar::Int(i) => BigFloat::from_bigint(i, prec),
        Scalar::Rat(r) => BigFloat::from_ratio(r.numer(), r.denom(), prec)
            .expect("canonical rationals have nonzero denominators"),
        Scalar::Mod(m) => BigFloat::from_i64(m.value() as i64, prec),
        Scalar::F64(f) => BigFloat::from_f64(*f, prec).unwrap_or_else(|_| BigFloat::zero(prec)),
        Scalar::Big(b) => b.clone(),
    }
}

/// Brings two scalars to a common kind.
fn promote(a: &Scalar, b: &Scalar) -> (Scalar, Scalar) {
    use Scalar::*;
    match (a, b) {
        (Int(_), Int(_)) | (Rat(_), Rat(_)) | (F64(_), F64(_)) => (a.clone(), b.clone()),
        (Int(_), Rat(_)) | (Rat(_), Int(_)) => {
            (Rat(a.as_rational().unwrap()), Rat(b.as_rational().unwrap()))
        }
        (Mod(m), _) => (a.clone(), Mod(to_mod(b, m.modulus()))),
        (_, Mod(m)) => (Mod(to_mod(a, m.modulus())), b.clone()),
        (Big(x), Big(y)) => {
            let p = x.precision().max(y.precision());
            (Big(x.with_precision(p)), Big(y.with_precision(p)))
        }
        (Big(x), _) => (a.clone(), Big(to_big(b, x.precision()))),
        (_, Big(y)) => (Big(to_big(a, y.precision())), b.clone()),
        (F64(_), _) => (a.clone(), F64(b.to_f64())),
        (_, F64(_)) => (F64(a.to_f64()), b.clone()),
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt, $modop:tt) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                use Scalar::*;
                match (self, rhs) {
                    (Int(a), Int(b)) => Int(a $op b),
                    (Rat(a), Rat(b)) => Scalar::from_rational(a $op b),
                    (F64(a), F64(b)) => F64(a $op b),
                    (Mod(a), Mod(b)) => Mod(a $modop b),
                    (Big(a), Big(b)) => Big(a $op b),
                    (a, b) => {
                        let (a, b) = promote(&a, &b);
                        a $op b
                    }
                }
            }
        }
    };
}

binop!(Add, add, +, +);
binop!(Sub, sub, -, -);
binop!(Mul, mul, *, *);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Int(a) => Scalar::Int(-a),
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Mod(a) => Scalar::Mod(-a),
            Scalar::F64(a) => Scalar::F64(-a),
            Scalar::Big(a) => Scalar::Big(-a),
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        use Scalar::*;
        match (self, other) {
            (Int(a), Int(b)) => a == b,
            (Rat(a), Rat(b)) => a == b,
            (Mod(a), Mod(b)) => a == b,
            (F64(a), F64(b)) => a == b,
            (Big(a), Big(b)) => a == b,
            (Int(_), Rat(_)) | (Rat(_), Int(_)) => false,
            _ => {
                let (a, b) = promote(self, other);
                a == b
            }
        }
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Scalar {
        Scalar::Int(BigInt::from(v))
    }
}

impl From<BigInt> for Scalar {
    fn from(v: BigInt) -> Scalar {
        Scalar::Int(v)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Int(i) => write!(f, "{i}"),
            Scalar::Rat(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Mod(m) => write!(f, "{m}"),
            Scalar::F64(v) => write!(f, "{v}"),
            Scalar::Big(b) => write!(f, "{b}"),
        }
    }
}

impl Ring for Scalar {
    fn zero() -> Self {
        Scalar::Int(BigInt::zero())
    }
    fn one() -> Self {
        Scalar::Int(BigInt::one())
    }
    fn is_zero(&self) -> bool {
        match self {
            Scalar::Int(i) => i.is_zero(),
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod(m) => m.is_zero(),
            Scalar::F64(v) => *v == 0.0,
            Scalar::Big(b) => b.is_zero(),
        }
    }
    fn is_one(&self) -> bool {
        match self {
            Scalar::Int(i) => i.is_one(),
            Scalar::Mod(m) => m.value() == 1,
            Scalar::F64(v) => *v == 1.0,
            Scalar::Big(b) => *b == BigFloat::from_i64(1, b.precision()),
            Scalar::Rat(_) => false,
        }
    }
    fn from_i64(v: i64) -> Self {
        Scalar::from(v)
    }
}

impl ExactDiv for Scalar {
    fn exact_div(&self, rhs: &Scalar) -> Option<Scalar> {
        if Ring::is_zero(rhs) {
            return None;
        }
        match (self, rhs) {
            (Scalar::Int(a), Scalar::Int(b)) => {
                let (q, r) = a.div_rem(b);
                r.is_zero().then_some(Scalar::Int(q))
            }
            _ => self.checked_div(rhs).ok(),
        }
    }

    fn known_quotient(&self, rhs: &Scalar) -> Option<Scalar> {
        self.exact_div(rhs).or_else(|| self.checked_div(rhs).ok())
    }
}

impl Field for Scalar {
    fn inv(&self) -> Option<Scalar> {
        self.try_inv().ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d).unwrap()
    }

    #[test]
    fn canonical_rationals() {
        assert_eq!(q(2, 4), q(1, 2));
        assert_eq!(q(3, -6).to_string(), "-1/2");
        assert_eq!(q(0, 7), Scalar::int(0));
        assert!(matches!(q(4, 2), Scalar::Int(_)));
        assert_eq!(Scalar::ratio(1, 0), Err(ArithError::ZeroDenominator));
    }

    #[test]
    fn promotion_into_residues() {
        let m = Scalar::Mod(ModInt::new(3, 7));
        assert_eq!((m.clone() + Scalar::int(5)).to_string(), "1");
        assert_eq!((m * q(1, 3)).to_string(), "1");
    }

    #[test]
    fn exact_division() {
        assert_eq!(
            Scalar::int(12).exact_div(&Scalar::int(4)),
            Some(Scalar::int(3))
        );
        assert_eq!(Scalar::int(12).exact_div(&Scalar::int(5)), None);
        assert_eq!(q(1, 2).exact_div(&q(1, 4)), Some(Scalar::int(2)));
        assert_eq!(Scalar::int(1).exact_div(&Scalar::int(0)), None);
    }

    #[test]
    fn float_formatting() {
        assert_eq!(format_f64(2.6040, 3), "2.604");
        assert_eq!(format_f64(1.92, 3), "1.920");
        assert_eq!(format_f64(-0.0001, 2), "0.00");
        assert_eq!(format_f64(std::f64::consts::FRAC_1_SQRT_2, 2), "0.71");
        assert_eq!(format_f64(0.125, 2), "0.12");
    }

    #[test]
    fn mixed_comparisons() {
        assert_eq!(q(1, 2).compare(&Scalar::F64(0.75)), Some(Ordering::Less));
        assert_eq!(Scalar::int(3).compare(&q(5, 2)), Some(Ordering::Greater));
        assert_eq!(Scalar::F64(2.0), Scalar::int(2));
    }
}
