//! Residues modulo a prime.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::ArithError;

/// Default prime for both `MOD` and `MOD32`.
pub const DEFAULT_MODULUS: u64 = 268_435_399;

/// Exclusive upper bound for `MOD32`.
pub const MOD32_BOUND: u64 = 1 << 31;

/// Exclusive upper bound for `MOD`; residues are multiplied in `u128`.
pub const MOD_BOUND: u64 = 1 << 63;

const MILLER_RABIN_BASES: [u64; 32] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127, 131,
];

/// An element of `Z/pZ`, stored as its least non-negative residue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModInt {
    value: u64,
    modulus: u64,
}

impl ModInt {
    /// Builds the residue of `value` modulo `modulus`. The modulus is trusted;
    /// use [`check_prime_modulus`] when it comes from user input.
    pub fn new(value: i128, modulus: u64) -> Self {
        let m = modulus as i128;
        let v = value.rem_euclid(m);
        ModInt {
            value: v as u64,
            modulus,
        }
    }

    pub fn from_u64(value: u64, modulus: u64) -> Self {
        ModInt {
            value: value % modulus,
            modulus,
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inverse(&self) -> Result<ModInt, ArithError> {
        if self.value == 0 {
            return Err(ArithError::ZeroInversion);
        }
        let (mut r0, mut r1) = (self.modulus as i128, self.value as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        if r0 != 1 {
            // Only reachable for a composite modulus.
            return Err(ArithError::NonPrimeModulus(self.modulus));
        }
        Ok(ModInt::new(t0, self.modulus))
    }

    pub fn pow(&self, mut exp: u64) -> ModInt {
        let mut base = *self;
        let mut acc = ModInt::from_u64(1, self.modulus);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            exp >>= 1;
        }
        acc
    }

    fn assert_same(&self, other: &ModInt) {
        assert_eq!(
            self.modulus, other.modulus,
            "arithmetic between residues of different moduli"
        );
    }
}

impl fmt::Display for ModInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for ModInt {
    type Output = ModInt;
    fn add(self, rhs: ModInt) -> ModInt {
        self.assert_same(&rhs);
        let s = (self.value as u128 + rhs.value as u128) % self.modulus as u128;
        ModInt {
            value: s as u64,
            modulus: self.modulus,
        }
    }
}

impl Sub for ModInt {
    type Output = ModInt;
    fn sub(self, rhs: ModInt) -> ModInt {
        self + (-rhs)
    }
}

impl Neg for ModInt {
    type Output = ModInt;
    fn neg(self) -> ModInt {
        if self.value == 0 {
            self
        } else {
            ModInt {
                value: self.modulus - self.value,
                modulus: self.modulus,
            }
        }
    }
}

impl Mul for ModInt {
    type Output = ModInt;
    fn mul(self, rhs: ModInt) -> ModInt {
        self.assert_same(&rhs);
        let p = (self.value as u128 * rhs.value as u128) % self.modulus as u128;
        ModInt {
            value: p as u64,
            modulus: self.modulus,
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Miller–Rabin with 32 rounds (the first 32 primes as witnesses, which is
/// also deterministic over the whole `u64` range).
pub fn is_probable_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MILLER_RABIN_BASES {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &MILLER_RABIN_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Validates a user-supplied modulus against `bound` and primality.
pub fn check_prime_modulus(p: u64, bound: u64) -> Result<u64, ArithError> {
    if p >= bound {
        return Err(ArithError::ModulusTooLarge { modulus: p, bound });
    }
    if !is_probable_prime(p) {
        return Err(ArithError::NonPrimeModulus(p));
    }
    Ok(p)
}
