//! Binary floating point with a per-value working precision.
//!
//! A value is `mantissa · 2^exponent` with `|mantissa| < 2^prec`. Every
//! operation rounds its exact result to nearest, ties to even, at the larger
//! of the operand precisions.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ArithError;

/// Decimal guard digits carried beyond the display precision.
pub const GUARD_DIGITS: u32 = 10;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Working precision in bits for `floatpos` displayed decimals.
pub fn precision_for_places(floatpos: u32) -> u32 {
    ((floatpos + GUARD_DIGITS) as f64 * LOG2_10).ceil() as u32
}

#[derive(Clone, Debug)]
pub struct BigFloat {
    mantissa: BigInt,
    exponent: i64,
    prec: u32,
}

fn round_magnitude(mag: BigUint, exponent: i64, prec: u32) -> (BigUint, i64) {
    let bits = mag.bits();
    if bits <= prec as u64 {
        return (mag, exponent);
    }
    let shift = bits - prec as u64;
    let mut q: BigUint = &mag >> shift;
    let rem: BigUint = &mag - (&q << shift);
    let half: BigUint = BigUint::one() << (shift - 1);
    let round_up = match rem.cmp(&half) {
        Ordering::Greater => true,
        Ordering::Equal => q.is_odd(),
        Ordering::Less => false,
    };
    let mut exp = exponent + shift as i64;
    if round_up {
        q += 1u32;
        if q.bits() > prec as u64 {
            q >>= 1;
            exp += 1;
        }
    }
    (q, exp)
}

impl BigFloat {
    fn from_parts(mantissa: BigInt, exponent: i64, prec: u32) -> Self {
        if mantissa.is_zero() {
            return BigFloat::zero(prec);
        }
        let (sign, mag) = mantissa.into_parts();
        let (mag, exponent) = round_magnitude(mag, exponent, prec);
        BigFloat {
            mantissa: BigInt::from_biguint(sign, mag),
            exponent,
            prec,
        }
    }

    pub fn zero(prec: u32) -> Self {
        BigFloat {
            mantissa: BigInt::zero(),
            exponent: 0,
            prec,
        }
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Self {
        BigFloat::from_parts(v.clone(), 0, prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        BigFloat::from_parts(BigInt::from(v), 0, prec)
    }

    /// Exact conversion of a finite `f64`, then rounded to `prec`.
    pub fn from_f64(v: f64, prec: u32) -> Result<Self, ArithError> {
        if !v.is_finite() {
            return Err(ArithError::NonFinite);
        }
        if v == 0.0 {
            return Ok(BigFloat::zero(prec));
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Ok(BigFloat::from_parts(BigInt::from(mant) * sign, exp, prec))
    }

    /// Correctly rounded quotient `num / den`.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Result<Self, ArithError> {
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        let a = BigFloat::from_parts(num.clone(), 0, u32::MAX);
        let b = BigFloat::from_parts(den.clone(), 0, u32::MAX);
        Ok(a.div_at(&b, prec))
    }

    /// Parses `[-]digits[.digits][e[-]digits]`.
    pub fn parse(text: &str, prec: u32) -> Result<Self, ArithError> {
        let bad = || ArithError::Parse(text.to_string());
        let s = text.trim();
        let (neg, s) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (body, exp10) = match s.find(['e', 'E']) {
            Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| bad())?),
            None => (s, 0),
        };
        let (int_part, frac_part) = match body.find('.') {
            Some(i) => (&body[..i], &body[i + 1..]),
            None => (body, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part
            .chars()
            .chain(frac_part.chars())
            .all(|c| c.is_ascii_digit())
        {
            return Err(bad());
        }
        let digits = format!("{int_part}{frac_part}");
        let mut n: BigInt = digits.parse().map_err(|_| bad())?;
        if neg {
            n = -n;
        }
        let scale = exp10 - frac_part.len() as i64;
        if scale >= 0 {
            let p = BigInt::from(10u32).pow(scale as u32);
            Ok(BigFloat::from_parts(n * p, 0, prec))
        } else {
            let p = BigInt::from(10u32).pow((-scale) as u32);
            BigFloat::from_ratio(&n, &p, prec)
        }
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn with_precision(&self, prec: u32) -> Self {
        BigFloat::from_parts(self.mantissa.clone(), self.exponent, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            mantissa: self.mantissa.abs(),
            ..self.clone()
        }
    }

    /// Unit roundoff `2^(1 - prec)`.
    pub fn epsilon(prec: u32) -> Self {
        BigFloat::from_parts(BigInt::one(), 1 - prec as i64, prec)
    }

    fn top_bit(&self) -> i64 {
        self.exponent + self.mantissa.bits() as i64
    }

    fn add_at(&self, rhs: &BigFloat, prec: u32) -> BigFloat {
        if rhs.is_zero() {
            return self.with_precision(prec);
        }
        if self.is_zero() {
            return rhs.with_precision(prec);
        }
        // An operand entirely below the rounding position only matters as a
        // sticky bit; nudge the mantissa so the rounding direction is right.
        let gap = prec as i64 + 3;
        if self.top_bit() - rhs.top_bit() > gap {
            return sticky_add(self, rhs, prec);
        }
        if rhs.top_bit() - self.top_bit() > gap {
            return sticky_add(rhs, self, prec);
        }
        let e = self.exponent.min(rhs.exponent);
        let a = &self.mantissa << (self.exponent - e) as usize;
        let b = &rhs.mantissa << (rhs.exponent - e) as usize;
        BigFloat::from_parts(a + b, e, prec)
    }

    fn mul_at(&self, rhs: &BigFloat, prec: u32) -> BigFloat {
        BigFloat::from_parts(
            &self.mantissa * &rhs.mantissa,
            self.exponent + rhs.exponent,
            prec,
        )
    }

    fn div_at(&self, rhs: &BigFloat, prec: u32) -> BigFloat {
        assert!(!rhs.is_zero(), "BigFloat division by zero");
        if self.is_zero() {
            return BigFloat::zero(prec);
        }
        let want = prec as i64 + 2 + rhs.mantissa.bits() as i64 - self.mantissa.bits() as i64;
        let shift = want.max(0) as usize;
        let num = &self.mantissa << shift;
        let (mut q, r) = num.div_rem(&rhs.mantissa);
        let mut exp = self.exponent - rhs.exponent - shift as i64;
        if !r.is_zero() {
            // Sticky bit below the quotient's last position.
            q = (q << 1usize)
                + if self.is_negative() ^ rhs.is_negative() {
                    -1
                } else {
                    1
                };
            exp -= 1;
        }
        BigFloat::from_parts(q, exp, prec)
    }

    /// Correctly rounded square root; `None` for negative input.
    pub fn sqrt(&self) -> Option<BigFloat> {
        if self.is_negative() {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        let prec = self.prec;
        let bits = self.mantissa.bits() as i64;
        let mut shift = (2 * prec as i64 + 4 - bits).max(0);
        if (self.exponent - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = (&self.mantissa << shift as usize).to_biguint()?;
        let r = m.sqrt();
        let mut exp = (self.exponent - shift) / 2;
        let mut root = BigInt::from(r.clone());
        if &r * &r != m {
            root = (root << 1usize) + 1;
            exp -= 1;
        }
        Some(BigFloat::from_parts(root, exp, prec))
    }

    pub fn powi(&self, mut n: u32) -> BigFloat {
        let mut base = self.clone();
        let mut acc = BigFloat::from_i64(1, self.prec);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_at(&base, self.prec);
            }
            base = base.mul_at(&base, self.prec);
            n >>= 1;
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mantissa.bits() as i64;
        let drop = (bits - 64).max(0);
        let top = (&self.mantissa >> drop as usize).to_f64().unwrap_or(0.0);
        let e = self.exponent + drop;
        let clamped = e.clamp(-2200, 2200) as i32;
        // Split the scaling so intermediate powers stay finite.
        let half = clamped / 2;
        top * 2f64.powi(half) * 2f64.powi(clamped - half)
    }

    /// `round(self · 10^places)` with ties to even, exactly.
    fn scaled_round(&self, places: u32) -> BigInt {
        let scaled = &self.mantissa * BigInt::from(10u32).pow(places);
        if self.exponent >= 0 {
            return scaled << self.exponent as usize;
        }
        let den = BigInt::one() << (-self.exponent) as usize;
        let (q, r) = scaled.div_mod_floor(&den);
        let twice = &r << 1usize;
        match twice.cmp(&den) {
            Ordering::Greater => q + 1,
            Ordering::Equal if q.is_odd() => q + 1,
            _ => q,
        }
    }

    /// Fixed-point decimal rendering with exactly `places` digits after the
    /// point, rounded half to even. Negative zero renders unsigned.
    pub fn to_decimal(&self, places: u32) -> String {
        format_scaled(&self.scaled_round(places), places)
    }

    /// `π` at `prec` bits via Machin's formula in fixed point.
    pub fn pi(prec: u32) -> BigFloat {
        let work = prec as usize + 32;
        let one = BigInt::one() << work;
        let atan_inv = |k: u32| -> BigInt {
            let k2 = BigInt::from(k * k);
            let mut term = &one / BigInt::from(k);
            let mut sum = term.clone();
            let mut n = 1u32;
            loop {
                term = &term / &k2;
                if term.is_zero() {
                    break;
                }
                let t = &term / BigInt::from(2 * n + 1);
                if n % 2 == 1 {
                    sum -= t;
                } else {
                    sum += t;
                }
                n += 1;
            }
            sum
        };
        let v = atan_inv(5) * 16 - atan_inv(239) * 4;
        BigFloat::from_parts(v, -(work as i64), prec)
    }

    /// Cosine by reduction into `[-π, π]` and a Taylor series in fixed point.
    pub fn cos(&self) -> BigFloat {
        self.trig(true)
    }

    pub fn sin(&self) -> BigFloat {
        self.trig(false)
    }

    fn trig(&self, cosine: bool) -> BigFloat {
        let prec = self.prec;
        let extra = (self.top_bit().max(0) as u32) + 64;
        let wprec = prec + extra;
        let pi = BigFloat::pi(wprec);
        let two_pi = pi.mul_at(&BigFloat::from_i64(2, wprec), wprec);
        let x = self.with_precision(wprec);
        let turns = x.div_at(&two_pi, wprec).round_to_integer();
        let r = x.add_at(
            &-two_pi.mul_at(&BigFloat::from_bigint(&turns, wprec), wprec),
            wprec,
        );
        // Fixed point with `work` fractional bits.
        let work = wprec as usize;
        let fixed = |v: &BigFloat| -> BigInt {
            let shift = v.exponent + work as i64;
            if shift >= 0 {
                &v.mantissa << shift as usize
            } else {
                &v.mantissa >> (-shift) as usize
            }
        };
        let xf = fixed(&r);
        let x2 = (&xf * &xf) >> work;
        let mut term = if cosine { BigInt::one() << work } else { xf };
        let mut sum = term.clone();
        let mut n: u64 = if cosine { 0 } else { 1 };
        loop {
            term = -((&term * &x2) >> work) / BigInt::from((n + 1) * (n + 2));
            if term.is_zero() {
                break;
            }
            sum += &term;
            n += 2;
        }
        BigFloat::from_parts(sum, -(work as i64), prec)
    }

    fn round_to_integer(&self) -> BigInt {
        self.scaled_round(0)
    }
}

fn sticky_add(big: &BigFloat, small: &BigFloat, prec: u32) -> BigFloat {
    let m = &big.mantissa << (prec as usize + 8);
    let nudge = if small.is_negative() { -1 } else { 1 };
    BigFloat::from_parts(m + nudge, big.exponent - (prec as i64 + 8), prec)
}

pub(crate) fn format_scaled(n: &BigInt, places: u32) -> String {
    let neg = n.is_negative();
    let digits = n.abs().to_string();
    let places = places as usize;
    let body = if places == 0 {
        digits
    } else if digits.len() <= places {
        format!("0.{}{}", "0".repeat(places - digits.len()), digits)
    } else {
        let split = digits.len() - places;
        format!("{}.{}", &digits[..split], &digits[split..])
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let sa = self.mantissa.sign();
        let sb = other.mantissa.sign();
        if sa != sb {
            let rank = |s: Sign| match s {
                Sign::Minus => 0,
                Sign::NoSign => 1,
                Sign::Plus => 2,
            };
            return Some(rank(sa).cmp(&rank(sb)));
        }
        if sa == Sign::NoSign {
            return Some(Ordering::Equal);
        }
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as usize;
        let b = &other.mantissa << (other.exponent - e) as usize;
        Some(a.cmp(&b))
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let places = ((self.prec as f64) / LOG2_10).floor() as u32;
        let places = places.saturating_sub(GUARD_DIGITS).max(1);
        write!(
            f,
            "{}",
            self.to_decimal(f.precision().map(|p| p as u32).unwrap_or(places))
        )
    }
}

impl Add for BigFloat {
    type Output = BigFloat;
    fn add(self, rhs: BigFloat) -> BigFloat {
        let p = self.prec.max(rhs.prec);
        self.add_at(&rhs, p)
    }
}

impl Sub for BigFloat {
    type Output = BigFloat;
    fn sub(self, rhs: BigFloat) -> BigFloat {
        let p = self.prec.max(rhs.prec);
        self.add_at(&-rhs, p)
    }
}

impl Mul for BigFloat {
    type Output = BigFloat;
    fn mul(self, rhs: BigFloat) -> BigFloat {
        let p = self.prec.max(rhs.prec);
        self.mul_at(&rhs, p)
    }
}

impl Div for BigFloat {
    type Output = BigFloat;
    fn div(self, rhs: BigFloat) -> BigFloat {
        let p = self.prec.max(rhs.prec);
        self.div_at(&rhs, p)
    }
}

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat {
            mantissa: -self.mantissa,
            ..self
        }
    }
}

impl Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        -self.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI_50: &str = "3.14159265358979323846264338327950288419716939937511";

    #[test]
    fn pi_digits() {
        let pi = BigFloat::pi(precision_for_places(50));
        assert_eq!(pi.to_decimal(50), PI_50);
        assert_eq!(BigFloat::pi(precision_for_places(3)).to_decimal(3), "3.142");
    }

    #[test]
    fn sqrt_two() {
        let p = precision_for_places(30);
        let r = BigFloat::from_i64(2, p).sqrt().unwrap();
        assert_eq!(r.to_decimal(30), "1.414213562373095048801688724210");
        assert!(BigFloat::from_i64(-2, p).sqrt().is_none());
    }

    #[test]
    fn parse_and_format() {
        let p = precision_for_places(8);
        let g = BigFloat::parse("9.80665", p).unwrap();
        assert_eq!(g.to_decimal(5), "9.80665");
        assert_eq!(BigFloat::parse("-0.5", p).unwrap().to_decimal(2), "-0.50");
        assert_eq!(BigFloat::parse("1e3", p).unwrap().to_decimal(0), "1000");
        assert!(BigFloat::parse("1.2.3", p).is_err());
    }

    #[test]
    fn ties_round_to_even() {
        let p = 64;
        assert_eq!(BigFloat::parse("0.125", p).unwrap().to_decimal(2), "0.12");
        assert_eq!(BigFloat::parse("0.375", p).unwrap().to_decimal(2), "0.38");
        assert_eq!(BigFloat::parse("-0.001", p).unwrap().to_decimal(2), "0.00");
    }

    #[test]
    fn arithmetic_matches_f64() {
        let p = 200;
        let a = BigFloat::from_f64(1.25, p).unwrap();
        let b = BigFloat::from_f64(-3.5, p).unwrap();
        assert_eq!((a.clone() + b.clone()).to_f64(), -2.25);
        assert_eq!((a.clone() * b.clone()).to_f64(), -4.375);
        assert!(((a / b).to_f64() + 0.357142857142857).abs() < 1e-14);
    }

    #[test]
    fn cosine_of_third_pi() {
        let p = precision_for_places(20);
        let x = BigFloat::pi(p) / BigFloat::from_i64(3, p);
        assert_eq!(x.cos().to_decimal(20), "0.50000000000000000000");
        let big = BigFloat::from_i64(100, p);
        assert!((big.cos().to_f64() - 100f64.cos()).abs() < 1e-14);
    }

    #[test]
    fn huge_exponent_gap() {
        let p = 64;
        let one = BigFloat::from_i64(1, p);
        let tiny = BigFloat::parse("1e-300", p).unwrap();
        assert_eq!((one.clone() + tiny.clone()).to_decimal(5), "1.00000");
        assert_eq!((tiny.clone() - one).to_decimal(3), "-1.000");
    }
}
