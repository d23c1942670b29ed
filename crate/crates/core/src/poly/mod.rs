//! Sparse multivariate polynomials over [`Scalar`] coefficients together with
//! resultants, GCDs, rational functions and univariate solving.

mod frac;
mod gcd;
mod intervals;
mod monomial;
mod resultant;
mod roots;
mod upoly;

pub use frac::Frac;
pub use gcd::{
    content_in, extended_gcd, gcd, gcd_with_stats, lcm, monic_gcd, primitive_part_in, GcdStats,
};
pub use intervals::{solve_inequalities, Algebraic, Bound, Interval, IntervalSet, Point, Relation};
pub use monomial::Monomial;
pub use resultant::{discriminant, resultant, sylvester, SylvesterKind};
pub use roots::{solve_univariate, Root, RootSet, Surd};

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::arith::{ArithError, ExactDiv, Ring, Scalar};
use crate::render::{join_terms, Render, Style};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PolyError {
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("both polynomials are zero")]
    BothZero,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("the second-kind Sylvester matrix needs deg f >= deg g")]
    DegreeOrder,
    #[error("polynomial is not univariate")]
    NotUnivariate,
    #[error("constraints involve more than one variable")]
    MixedVariables,
    #[error("cannot solve in radicals: {0}")]
    UnsolvableInRadicals(String),
    #[error("operation not supported over {0}")]
    UnsupportedDomain(&'static str),
    #[error("coefficient is not a finite number")]
    NonFiniteCoefficient,
    #[error("division is not exact")]
    InexactDivision,
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Sparse polynomial; terms are kept in ascending [`Monomial`] order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn constant(c: Scalar) -> Poly {
        Poly::monomial(Monomial::one(), c)
    }

    pub fn var(i: usize) -> Poly {
        Poly::monomial(Monomial::var(i, 1), Scalar::one())
    }

    pub fn monomial(m: Monomial, c: Scalar) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, Scalar)>) -> Poly {
        let mut p = Poly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// Constant value, `0` for the zero polynomial; `None` if not constant.
    pub fn as_constant(&self) -> Option<Scalar> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    /// Terms from the largest monomial down.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn max_var(&self) -> Option<usize> {
        self.terms.keys().filter_map(Monomial::max_var).max()
    }

    /// Indices of variables that occur.
    pub fn variables(&self) -> Vec<usize> {
        let mut seen = Vec::new();
        for m in self.terms.keys() {
            for (i, e) in m.exps().iter().enumerate() {
                if *e > 0 && !seen.contains(&i) {
                    seen.push(i);
                }
            }
        }
        seen.sort_unstable();
        seen
    }

    /// Degree in variable `v`; `None` for the zero polynomial.
    pub fn degree_in(&self, v: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exp(v)).max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Coefficients in `v`, index = exponent; each coefficient is free of `v`.
    pub fn coeffs_in(&self, v: usize) -> Vec<Poly> {
        let n = self.degree_in(v).map_or(0, |d| d as usize + 1);
        let mut out = vec![Poly::zero(); n];
        for (m, c) in &self.terms {
            out[m.exp(v) as usize].add_term(m.without(v), c.clone());
        }
        out
    }

    pub fn from_coeffs_in(v: usize, coeffs: &[Poly]) -> Poly {
        let mut p = Poly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                p.add_term(m.with_exp(v, k as u32), a.clone());
            }
        }
        p
    }

    /// Leading coefficient with respect to `v`.
    pub fn lc_in(&self, v: usize) -> Poly {
        self.coeffs_in(v).pop().unwrap_or_default()
    }

    pub fn is_free_of(&self, v: usize) -> bool {
        self.terms.keys().all(|m| m.exp(v) == 0)
    }

    /// True if no variable other than `v` occurs.
    pub fn is_univariate_in(&self, v: usize) -> bool {
        self.terms.keys().all(|m| m.without(v).is_one())
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        self.map_coeffs(|a| a.clone() * c.clone())
    }

    pub fn map_coeffs(&self, mut f: impl FnMut(&Scalar) -> Scalar) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub fn try_map_coeffs<E>(
        &self,
        mut f: impl FnMut(&Scalar) -> Result<Scalar, E>,
    ) -> Result<Poly, E> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c)?);
        }
        Ok(out)
    }

    pub fn coefficients(&self) -> impl Iterator<Item = &Scalar> {
        self.terms.values()
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Scalar) -> Poly {
        Poly::from_terms(
            self.terms
                .iter()
                .map(|(k, a)| (k.mul(m), a.clone() * c.clone())),
        )
    }

    /// Replace variable `v` by `value`.
    pub fn substitute(&self, v: usize, value: &Poly) -> Poly {
        let coeffs = self.coeffs_in(v);
        let mut acc = Poly::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        acc
    }

    pub fn eval_var(&self, v: usize, value: &Scalar) -> Poly {
        self.substitute(v, &Poly::constant(value.clone()))
    }

    /// Value at a point; `point[i]` is the value of variable `i`.
    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, e) in m.exps().iter().enumerate() {
                if *e > 0 {
                    t = t * point[i].pow(*e);
                }
            }
            acc = acc + t;
        }
        acc
    }

    pub fn derivative(&self, v: usize) -> Poly {
        Poly::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let e = m.exp(v);
            (e > 0).then(|| (m.with_exp(v, e - 1), c.clone() * Scalar::from(e as i64)))
        }))
    }

    /// Pseudo-division in `v`: `lc(b)^(deg a − deg b + 1) · a = q·b + r`.
    pub fn pseudo_div_in(&self, b: &Poly, v: usize) -> (Poly, Poly) {
        let db = b.degree_in(v).expect("pseudo-division by zero");
        let lb = b.lc_in(v);
        let mut r = self.clone();
        let mut q = Poly::zero();
        let Some(da) = r.degree_in(v) else {
            return (q, r);
        };
        if da < db {
            return (q, r);
        }
        let mut e = da - db + 1;
        while let Some(dr) = r.degree_in(v) {
            if r.is_zero() || dr < db {
                break;
            }
            let lr = r.lc_in(v);
            let shift = Poly::monomial(Monomial::var(v, dr - db), Scalar::one());
            let t = &lr * &shift;
            q = &(&q * &lb) + &t;
            r = &(&r * &lb) - &(&t * b);
            e -= 1;
        }
        let f = lb.pow(e);
        (&q * &f, &r * &f)
    }

    pub fn pseudo_rem_in(&self, b: &Poly, v: usize) -> Poly {
        self.pseudo_div_in(b, v).1
    }

    /// Division in `v` where the leading coefficient of `b` is an invertible
    /// constant; returns `(q, r)` with `a = q·b + r`.
    pub fn div_rem_in(&self, b: &Poly, v: usize) -> Result<(Poly, Poly), PolyError> {
        let db = b.degree_in(v).ok_or(PolyError::ZeroPolynomial)?;
        let inv = b
            .lc_in(v)
            .as_constant()
            .ok_or(PolyError::InexactDivision)?
            .try_inv()?;
        let mut r = self.clone();
        let mut q = Poly::zero();
        while let Some(dr) = r.degree_in(v) {
            if dr < db {
                break;
            }
            let t = r.lc_in(v).mul_monomial(&Monomial::var(v, dr - db), &inv);
            r = &r - &(&t * b);
            if r.degree_in(v) == Some(dr) {
                // Float cancellation left a residue in the eliminated slot.
                let keep: Vec<_> = r
                    .terms
                    .iter()
                    .filter(|(m, _)| m.exp(v) != dr)
                    .map(|(m, c)| (m.clone(), c.clone()))
                    .collect();
                r = Poly::from_terms(keep);
            }
            q = &q + &t;
        }
        Ok((q, r))
    }

    /// Largest coefficient bit length (exact coefficients).
    pub fn max_coeff_bits(&self) -> u64 {
        self.terms
            .values()
            .map(Scalar::bit_length)
            .max()
            .unwrap_or(0)
    }

    pub fn is_exact(&self) -> bool {
        self.terms.values().all(Scalar::is_exact)
    }

    pub fn has_float(&self) -> bool {
        self.terms.values().any(Scalar::is_float)
    }

    pub fn has_residue(&self) -> bool {
        self.terms.values().any(|c| matches!(c, Scalar::Mod(_)))
    }

    /// All coefficients are integers (or the polynomial is zero).
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| matches!(c, Scalar::Int(_)))
    }

    pub fn leading_coeff(&self) -> Scalar {
        self.leading_term()
            .map_or_else(Scalar::zero, |(_, c)| c.clone())
    }

    /// Divide by the leading coefficient (fields only).
    pub fn monic(&self) -> Result<Poly, PolyError> {
        let lc = self.leading_coeff();
        if lc.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        Ok(self.scale(&lc.try_inv()?))
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> num_bigint::BigInt {
        let mut l = num_bigint::BigInt::one();
        for c in self.terms.values() {
            if let Scalar::Rat(r) = c {
                l = num_integer::Integer::lcm(&l, r.denom());
            }
        }
        l
    }

    /// Gcd of integer coefficients, signed like the leading coefficient.
    /// `None` when some coefficient is not an integer.
    pub fn integer_content(&self) -> Option<num_bigint::BigInt> {
        let mut g = num_bigint::BigInt::zero();
        for c in self.terms.values() {
            match c {
                Scalar::Int(i) => g = num_integer::Integer::gcd(&g, i),
                _ => return None,
            }
        }
        if self.leading_coeff().is_negative() {
            g = -g;
        }
        Some(g)
    }

    /// Scale rational coefficients to a primitive integer polynomial with a
    /// positive leading coefficient; returns the factor applied.
    pub fn to_primitive_integer(&self) -> (Poly, Scalar) {
        if self.is_zero() {
            return (Poly::zero(), Scalar::one());
        }
        let d = Scalar::Int(self.denominator_lcm());
        let p = self.scale(&d);
        let c = p
            .integer_content()
            .expect("integral after clearing denominators");
        let p = p.map_coeffs(|a| {
            a.exact_div(&Scalar::Int(c.clone()))
                .expect("content divides")
        });
        let factor = d.checked_div(&Scalar::Int(c)).expect("nonzero content");
        (p, factor)
    }

    /// Largest absolute coefficient as `f64`.
    pub fn max_norm(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.to_f64().abs())
            .fold(0.0, f64::max)
    }

    fn term_text(m: &Monomial, c: &Scalar, st: &Style) -> String {
        if m.is_one() {
            return c.text(st);
        }
        let vars = monomial_text(m, st, "*", false);
        if c.is_one() {
            vars
        } else if (-c.clone()).is_one() && !matches!(c, Scalar::Mod(_)) {
            format!("-{vars}")
        } else {
            let cs = c.text(st);
            format!("{cs}*{vars}")
        }
    }

    fn term_latex(m: &Monomial, c: &Scalar, st: &Style) -> String {
        if m.is_one() {
            return c.latex(st);
        }
        let vars = monomial_text(m, st, "", true);
        if c.is_one() {
            vars
        } else if (-c.clone()).is_one() && !matches!(c, Scalar::Mod(_)) {
            format!("-{vars}")
        } else {
            format!("{}{vars}", c.latex(st))
        }
    }
}

fn monomial_text(m: &Monomial, st: &Style, sep: &str, latex: bool) -> String {
    let mut parts = Vec::new();
    for i in (0..m.exps().len()).rev() {
        let e = m.exp(i);
        if e == 0 {
            continue;
        }
        let name = st.var_name(i);
        parts.push(match (e, latex) {
            (1, _) => name,
            (_, false) => format!("{name}^{e}"),
            (_, true) => format!("{name}^{{{e}}}"),
        });
    }
    parts.join(sep)
}

impl Render for Poly {
    fn text(&self, st: &Style) -> String {
        if self.is_zero() {
            return "0".into();
        }
        join_terms(self.terms().map(|(m, c)| Poly::term_text(m, c, st)))
    }

    fn latex(&self, st: &Style) -> String {
        if self.is_zero() {
            return "0".into();
        }
        join_terms(self.terms().map(|(m, c)| Poly::term_latex(m, c, st)))
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, a) in &self.terms {
            for (mb, b) in &rhs.terms {
                out.add_term(ma.mul(mb), a.clone() * b.clone());
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.map_coeffs(|c| -c.clone())
    }
}

macro_rules! by_value {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                (&self).$f(&rhs)
            }
        }
    )*};
}
by_value!(Add add, Sub sub, Mul mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl From<Scalar> for Poly {
    fn from(c: Scalar) -> Poly {
        Poly::constant(c)
    }
}

impl Ring for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::constant(Scalar::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn from_i64(v: i64) -> Self {
        Poly::constant(Scalar::from(v))
    }
}

impl Poly {
    /// Multivariate division by a single divisor, dividing coefficients with
    /// `div`; `None` unless the remainder vanishes.
    fn divide_by(
        &self,
        rhs: &Poly,
        div: impl Fn(&Scalar, &Scalar) -> Option<Scalar>,
    ) -> Option<Poly> {
        let (lm, lc) = rhs.leading_term()?;
        if let Some(c) = rhs.as_constant() {
            return self.try_map_coeffs(|a| div(a, &c).ok_or(())).ok();
        }
        let mut r = self.clone();
        let mut q = Poly::zero();
        let float = self.has_float() || rhs.has_float();
        let tol = if float {
            1e-9 * self.max_norm().max(1.0)
        } else {
            0.0
        };
        while let Some((m, c)) = r.leading_term() {
            if float && c.to_f64().abs() <= tol {
                let m = m.clone();
                r.terms.remove(&m);
                continue;
            }
            let qm = lm.quotient_of(m)?;
            let qc = div(c, lc)?;
            r = &r - &rhs.mul_monomial(&qm, &qc);
            q.add_term(qm, qc);
        }
        Some(q)
    }
}

impl ExactDiv for Poly {
    /// Succeeds iff `rhs` divides `self` with quotient coefficients in the
    /// coefficient ring.
    fn exact_div(&self, rhs: &Poly) -> Option<Poly> {
        self.divide_by(rhs, Scalar::exact_div)
    }

    fn known_quotient(&self, rhs: &Poly) -> Option<Poly> {
        self.divide_by(rhs, Scalar::known_quotient)
    }
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;

    /// Builds a polynomial from `(coefficient, exponents)` pairs.
    pub fn p(terms: &[(i64, &[u32])]) -> Poly {
        Poly::from_terms(
            terms
                .iter()
                .map(|(c, e)| (Monomial::from_exps(e.to_vec()), Scalar::from(*c))),
        )
    }

    pub fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::testutil::*;
    use super::*;

    #[test]
    fn printing_follows_declared_order() {
        let vars = names(&["a", "b", "c", "x"]);
        let st = Style::new(&vars, 2);
        // 4*c*a^2 - b^2*a
        let r = p(&[(4, &[2, 0, 1]), (-1, &[1, 2])]);
        assert_eq!(r.text(&st), "4*c*a^2-b^2*a");
        assert_eq!(r.latex(&st), "4ca^{2}-b^{2}a");
        let yx = names(&["y", "x"]);
        let st = Style::new(&yx, 2);
        let g = p(&[(1, &[0, 1]), (-2, &[3]), (2, &[1])]);
        assert_eq!(g.text(&st), "x-2*y^3+2*y");
        assert_eq!(Poly::zero().text(&st), "0");
        assert_eq!(p(&[(-1, &[])]).text(&st), "-1");
    }

    #[test]
    fn arithmetic_and_derivative() {
        let vars = names(&["b", "c", "x"]);
        let st = Style::new(&vars, 2);
        let f = p(&[(1, &[0, 0, 2]), (1, &[1, 0, 1]), (1, &[0, 1])]);
        assert_eq!(f.derivative(2).text(&st), "2*x+b");
        assert_eq!(p(&[(7, &[])]).derivative(2), Poly::zero());
        let sq = &f * &f;
        assert_eq!(sq.exact_div(&f), Some(f.clone()));
        assert_eq!((&sq - &sq), Poly::zero());
        assert_eq!(f.exact_div(&p(&[(2, &[])])), None);
    }

    #[test]
    fn coefficient_views() {
        let f = p(&[(3, &[1, 2]), (1, &[0, 2]), (5, &[2])]);
        let cs = f.coeffs_in(1);
        assert_eq!(cs.len(), 3);
        assert_eq!(cs[2], p(&[(3, &[1]), (1, &[])]));
        assert_eq!(cs[0], p(&[(5, &[2])]));
        assert_eq!(Poly::from_coeffs_in(1, &cs), f);
        assert_eq!(f.lc_in(1), p(&[(3, &[1]), (1, &[])]));
    }

    #[test]
    fn pseudo_division_identity() {
        let a = p(&[(3, &[0, 3]), (1, &[1, 1]), (-2, &[])]);
        let b = p(&[(2, &[1, 1]), (1, &[])]);
        let (q, r) = a.pseudo_div_in(&b, 1);
        let lb = b.lc_in(1).pow(3 - 1 + 1);
        assert_eq!(&a * &lb, &(&q * &b) + &r);
        assert!(r.degree_in(1).unwrap_or(0) < 1);
    }
}
