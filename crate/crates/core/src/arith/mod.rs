//! Scalar arithmetic for every coefficient domain of the command language.

mod bigfloat;
mod domain;
mod modint;
mod real;
mod ring;
mod scalar;

pub use bigfloat::{precision_for_places, BigFloat, GUARD_DIGITS};
pub use domain::{parse_decimal_rational, Domain, DomainKind, DEFAULT_FLOATPOS};
pub use modint::{
    check_prime_modulus, is_probable_prime, ModInt, DEFAULT_MODULUS, MOD32_BOUND, MOD_BOUND,
};
pub use real::Real;
pub use ring::{ExactDiv, Field, Ring};
pub use scalar::{format_f64, Scalar};

use num_rational::BigRational;

/// Arbitrary-precision integer.
pub type Integer = num_bigint::BigInt;
/// Canonical big rational (`den > 0`, reduced).
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("zero has no multiplicative inverse")]
    ZeroInversion,
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("modulus {0} is not prime")]
    NonPrimeModulus(u64),
    #[error("modulus {modulus} must be below {bound}")]
    ModulusTooLarge { modulus: u64, bound: u64 },
    #[error("cannot convert a value of {from} into {to}")]
    IncompatibleDomains { from: String, to: String },
    #[error("unknown coefficient domain `{0}`")]
    UnknownDomain(String),
    #[error("variable `{0}` declared twice")]
    DuplicateVariable(String),
    #[error("cannot parse number `{0}`")]
    Parse(String),
    #[error("value is not finite")]
    NonFinite,
}

/// Canonical form of `num/den`.
pub fn normalize(num: Integer, den: Integer) -> Result<Rational, ArithError> {
    if num_traits::Zero::is_zero(&den) {
        return Err(ArithError::ZeroDenominator);
    }
    Ok(BigRational::new(num, den))
}

/// Inverse of a nonzero residue.
pub fn mod_inverse(a: &ModInt) -> Result<ModInt, ArithError> {
    a.inverse()
}
