use std::ops::{Add, Mul, Neg, Sub};

use super::{gcd, Poly, PolyError};
use crate::arith::{ArithError, ExactDiv, Field, Ring, Scalar};
use crate::matrix::Entry;
use crate::render::{Render, Style};

/// Rational function `num / den` in lowest terms.
///
/// Constant denominators are folded into the numerator. Otherwise the
/// denominator is a primitive integer polynomial with positive leading
/// coefficient (rational coefficients) or monic (residues and floats).
#[derive(Debug, Clone, PartialEq)]
pub struct Frac {
    num: Poly,
    den: Poly,
}

impl Frac {
    pub fn new(num: Poly, den: Poly) -> Result<Frac, PolyError> {
        if den.is_zero() {
            return Err(ArithError::DivisionByZero.into());
        }
        Frac::normalized(num, den)
    }

    fn normalized(num: Poly, den: Poly) -> Result<Frac, PolyError> {
        if num.is_zero() {
            return Ok(Frac::from(Poly::zero()));
        }
        if let Some(c) = den.as_constant() {
            let inv = c.try_inv()?;
            return Ok(Frac::from(num.scale(&inv)));
        }
        let float = num.has_float() || den.has_float();
        let (num, den) = if float {
            (num, den)
        } else {
            let g = gcd(&num, &den)?;
            let n = num.exact_div(&g).ok_or(PolyError::InexactDivision)?;
            let d = den.exact_div(&g).ok_or(PolyError::InexactDivision)?;
            (n, d)
        };
        if let Some(c) = den.as_constant() {
            return Ok(Frac::from(num.scale(&c.try_inv()?)));
        }
        if float || num.has_residue() || den.has_residue() {
            let inv = den.leading_coeff().try_inv()?;
            return Ok(Frac {
                num: num.scale(&inv),
                den: den.scale(&inv),
            });
        }
        let (d, factor) = den.to_primitive_integer();
        Ok(Frac {
            num: num.scale(&factor),
            den: d,
        })
    }

    pub fn constant(c: Scalar) -> Frac {
        Frac::from(Poly::constant(c))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_poly(&self) -> bool {
        self.den.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.is_poly().then_some(&self.num)
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        self.as_poly().and_then(Poly::as_constant)
    }

    pub fn try_inv(&self) -> Result<Frac, PolyError> {
        if self.num.is_zero() {
            return Err(ArithError::DivisionByZero.into());
        }
        Frac::normalized(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &Frac) -> Result<Frac, PolyError> {
        Ok(self.clone() * rhs.try_inv()?)
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> Result<Frac, PolyError> {
        Frac::new(self.num.map_coeffs(&f), self.den.map_coeffs(&f))
    }

    /// Numerator and denominator rescaled so both have integer coefficients.
    fn display_parts(&self) -> (Poly, Poly) {
        let l = Scalar::Int(self.num.denominator_lcm());
        (self.num.scale(&l), self.den.scale(&l))
    }
}

fn simple_factor(p: &Poly) -> bool {
    p.len() == 1
        && p.leading_coeff().is_one()
        && p.leading_term()
            .is_some_and(|(m, _)| m.exps().iter().filter(|e| **e > 0).count() == 1)
}

impl Render for Frac {
    fn text(&self, st: &Style) -> String {
        if self.is_poly() {
            return self.num.text(st);
        }
        let (n, d) = self.display_parts();
        let ns = if n.len() > 1 {
            format!("({})", n.text(st))
        } else {
            n.text(st)
        };
        let ds = if simple_factor(&d) {
            d.text(st)
        } else {
            format!("({})", d.text(st))
        };
        format!("{ns}/{ds}")
    }

    fn latex(&self, st: &Style) -> String {
        if self.is_poly() {
            return self.num.latex(st);
        }
        let (n, d) = self.display_parts();
        format!("\\frac{{{}}}{{{}}}", n.latex(st), d.latex(st))
    }
}

impl From<Poly> for Frac {
    fn from(p: Poly) -> Frac {
        Frac {
            num: p,
            den: Poly::one(),
        }
    }
}

impl From<Scalar> for Frac {
    fn from(c: Scalar) -> Frac {
        Frac::constant(c)
    }
}

fn combine(num: Poly, den: Poly) -> Frac {
    Frac::normalized(num, den).expect("denominators of normalized fractions are nonzero")
}

impl Add for Frac {
    type Output = Frac;
    fn add(self, rhs: Frac) -> Frac {
        if self.is_poly() && rhs.is_poly() {
            return Frac::from(&self.num + &rhs.num);
        }
        if self.den == rhs.den {
            return combine(&self.num + &rhs.num, self.den);
        }
        combine(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for Frac {
    type Output = Frac;
    fn sub(self, rhs: Frac) -> Frac {
        self + (-rhs)
    }
}

impl Mul for Frac {
    type Output = Frac;
    fn mul(self, rhs: Frac) -> Frac {
        if self.is_poly() && rhs.is_poly() {
            return Frac::from(&self.num * &rhs.num);
        }
        combine(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for Frac {
    type Output = Frac;
    fn neg(self) -> Frac {
        Frac {
            num: -self.num,
            den: self.den,
        }
    }
}

impl Ring for Frac {
    fn zero() -> Self {
        Frac::from(Poly::zero())
    }
    fn one() -> Self {
        Frac::from(Poly::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn from_i64(v: i64) -> Self {
        Frac::constant(Scalar::from(v))
    }
}

impl ExactDiv for Frac {
    fn exact_div(&self, rhs: &Frac) -> Option<Frac> {
        self.checked_div(rhs).ok()
    }
}

impl Field for Frac {
    fn inv(&self) -> Option<Frac> {
        self.try_inv().ok()
    }
}

impl Entry for Frac {
    fn magnitude(&self) -> Option<f64> {
        match self.as_constant() {
            Some(c) if c.is_float() => Some(c.to_f64().abs()),
            _ if self.num.has_float() => Some(self.num.max_norm()),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::*;

    #[test]
    fn lowest_terms_and_rendering() {
        let vars = names(&["x", "y"]);
        let st = Style::new(&vars, 2);
        let y = p(&[(1, &[0, 1])]);
        // (y^2 - x^2) / (y^3 - y x^2) = 1/y
        let n = p(&[(1, &[0, 2]), (-1, &[2])]);
        let d = p(&[(1, &[0, 3]), (-1, &[2, 1])]);
        let f = Frac::new(n, d.clone()).unwrap();
        assert_eq!(f, Frac::new(Poly::one(), y).unwrap());
        assert_eq!(f.text(&st), "1/y");
        let g = Frac::new(Poly::one(), d).unwrap();
        assert_eq!(g.text(&st), "1/(y^3-y*x^2)");
        let h = Frac::new(p(&[(-1, &[])]), p(&[(5, &[])])).unwrap();
        assert_eq!(h.text(&st), "-1/5");
        assert!(h.is_poly());
        let k = Frac::new(p(&[(1, &[1])]), p(&[(2, &[0, 1])])).unwrap();
        assert_eq!(k.text(&st), "x/(2*y)");
        assert_eq!(k.latex(&st), "\\frac{x}{2y}");
        let neg = Frac::new(p(&[(1, &[])]), p(&[(-2, &[0, 1]), (4, &[1])])).unwrap();
        assert_eq!(neg.text(&st), "-1/(2*y-4*x)");
    }

    #[test]
    fn field_arithmetic() {
        let x = Frac::from(p(&[(1, &[1])]));
        let y = Frac::from(p(&[(1, &[0, 1])]));
        let a = Frac::one().checked_div(&x).unwrap();
        let b = Frac::one().checked_div(&y).unwrap();
        let s = a.clone() + b.clone();
        // 1/x + 1/y = (x+y)/(xy)
        assert_eq!(s.clone() * x.clone() * y.clone(), x.clone() + y.clone());
        assert_eq!(s.clone() - a, b);
        assert!(Frac::zero().try_inv().is_err());
    }
}
